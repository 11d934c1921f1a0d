//! Adaptive cubature over axis-aligned boxes in 2 to 6 dimensions using an
//! embedded degree-7/degree-5 rule (Genz–Malik points). The cell with the
//! largest error estimate is bisected along the axis with the largest fourth
//! divided difference; values and errors are re-summed in cell-creation
//! order so results are bit-for-bit reproducible.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{cabs, IntegralResult, QuadratureError, QuadratureSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Heap key: largest error first, then oldest cell.
#[derive(PartialEq)]
struct HeapKey {
    err: f64,
    idx: usize,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct Cell {
    center: Vec<f64>,
    half: Vec<f64>,
    value: Complex64,
    err: f64,
    split_axis: usize,
}

struct Rule {
    dim: usize,
    // degree-7 weights (normalized so the rule averages over the cell)
    w: [f64; 5],
    // embedded degree-5 weights
    we: [f64; 4],
    x: Vec<f64>,
    fdiff: Vec<f64>,
}

const LAMBDA2: f64 = 0.358_568_582_800_318_06; // sqrt(9/70)
const LAMBDA4: f64 = 0.948_683_298_050_513_8; // sqrt(9/10)
const LAMBDA5: f64 = 0.688_247_201_611_685_3; // sqrt(9/19)
const DIFF_RATIO: f64 = 1.0 / 7.0; // (lambda2/lambda4)^2

struct CellEval {
    value: Complex64,
    err: f64,
    split_axis: usize,
}

impl Rule {
    fn new(dim: usize) -> Self {
        let d = dim as f64;
        let w = [
            (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0,
            980.0 / 6561.0,
            (1820.0 - 400.0 * d) / 19683.0,
            200.0 / 19683.0,
            (6859.0 / 19683.0) / (1u64 << dim) as f64,
        ];
        let we = [
            (729.0 - 950.0 * d + 50.0 * d * d) / 729.0,
            245.0 / 486.0,
            (265.0 - 100.0 * d) / 1458.0,
            25.0 / 729.0,
        ];
        Rule {
            dim,
            w,
            we,
            x: vec![0.0; dim],
            fdiff: vec![0.0; dim],
        }
    }

    fn points_per_eval(&self) -> u64 {
        let d = self.dim as u64;
        1 + 4 * d + 2 * d * (d - 1) + (1u64 << d)
    }

    fn apply<F>(
        &mut self,
        f: &mut F,
        center: &[f64],
        half: &[f64],
    ) -> Result<CellEval, QuadratureError>
    where
        F: FnMut(&[f64]) -> Complex64,
    {
        let d = self.dim;
        let mut vol = 1.0;
        for h in half.iter().take(d) {
            vol *= 2.0 * h;
        }
        let eval = |f: &mut F, x: &[f64]| -> Result<Complex64, QuadratureError> {
            let v = f(x);
            if v.re.is_nan() || v.im.is_nan() {
                return Err(QuadratureError::NonFiniteIntegrand);
            }
            Ok(v)
        };

        self.x[..d].copy_from_slice(&center[..d]);
        let fc = eval(f, &self.x)?;

        let mut sum2 = ZERO;
        let mut sum3 = ZERO;
        for i in 0..d {
            self.x[i] = center[i] + LAMBDA2 * half[i];
            let f1 = eval(f, &self.x)?;
            self.x[i] = center[i] - LAMBDA2 * half[i];
            let f2 = eval(f, &self.x)?;
            self.x[i] = center[i] + LAMBDA4 * half[i];
            let f3 = eval(f, &self.x)?;
            self.x[i] = center[i] - LAMBDA4 * half[i];
            let f4 = eval(f, &self.x)?;
            self.x[i] = center[i];
            sum2 += f1 + f2;
            sum3 += f3 + f4;
            // fourth divided difference along axis i steers the split choice
            let two_fc = fc + fc;
            self.fdiff[i] = cabs((f1 + f2 - two_fc) - (f3 + f4 - two_fc) * DIFF_RATIO);
        }

        let mut sum4 = ZERO;
        for i in 0..d {
            for j in (i + 1)..d {
                for &si in &[1.0, -1.0] {
                    for &sj in &[1.0, -1.0] {
                        self.x[i] = center[i] + si * LAMBDA4 * half[i];
                        self.x[j] = center[j] + sj * LAMBDA4 * half[j];
                        sum4 += eval(f, &self.x)?;
                    }
                }
                self.x[i] = center[i];
                self.x[j] = center[j];
            }
        }

        let mut sum5 = ZERO;
        for s in 0u64..(1u64 << d) {
            for k in 0..d {
                let sign = if (s >> k) & 1 == 1 { 1.0 } else { -1.0 };
                self.x[k] = center[k] + sign * LAMBDA5 * half[k];
            }
            sum5 += eval(f, &self.x)?;
        }

        let val7 = (fc * self.w[0]
            + sum2 * self.w[1]
            + sum3 * self.w[2]
            + sum4 * self.w[3]
            + sum5 * self.w[4])
            * vol;
        let val5 =
            (fc * self.we[0] + sum2 * self.we[1] + sum3 * self.we[2] + sum4 * self.we[3]) * vol;
        let err = cabs(val7 - val5);

        let mut split_axis = 0;
        let mut best = self.fdiff[0];
        for i in 1..d {
            if self.fdiff[i] > best {
                best = self.fdiff[i];
                split_axis = i;
            }
        }
        if best == 0.0 {
            // featureless along the probed axes: split the widest one
            let mut widest = half[0];
            for (i, &h) in half.iter().enumerate().take(d).skip(1) {
                if h > widest {
                    widest = h;
                    split_axis = i;
                }
            }
        }
        Ok(CellEval {
            value: val7,
            err,
            split_axis,
        })
    }
}

pub(crate) fn cubature<F>(
    f: &mut F,
    lo: &[f64],
    hi: &[f64],
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> Complex64,
{
    let dim = lo.len();
    let mut rule = Rule::new(dim);
    let per_eval = rule.points_per_eval();

    let center: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let half: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).collect();

    let first = rule.apply(f, &center, &half)?;
    let mut evals = per_eval;

    let mut cells = vec![Cell {
        center,
        half,
        value: first.value,
        err: first.err,
        split_axis: first.split_axis,
    }];
    let mut heap = BinaryHeap::new();
    heap.push(HeapKey {
        err: first.err,
        idx: 0,
    });

    let mut total_value = first.value;
    let mut total_err = first.err;

    let mut met_tolerance = false;
    loop {
        let tol = f64::max(spec.abs_tol, spec.rel_tol * cabs(total_value));
        if total_err <= tol {
            met_tolerance = true;
            break;
        }
        if evals + 2 * per_eval > spec.max_evals {
            break;
        }
        if cells.len() + 1 > spec.subdivision_limit {
            break;
        }
        let top = match heap.pop() {
            Some(k) => k,
            None => break,
        };
        let idx = top.idx;
        let axis = cells[idx].split_axis;
        let old_value = cells[idx].value;
        let old_err = cells[idx].err;

        let mut c_left = cells[idx].center.clone();
        let mut h_new = cells[idx].half.clone();
        h_new[axis] *= 0.5;
        c_left[axis] -= h_new[axis];
        let mut c_right = cells[idx].center.clone();
        c_right[axis] += h_new[axis];

        let left = rule.apply(f, &c_left, &h_new)?;
        let right = rule.apply(f, &c_right, &h_new)?;
        evals += 2 * per_eval;

        total_value += left.value + right.value - old_value;
        total_err += left.err + right.err - old_err;

        cells[idx] = Cell {
            center: c_left,
            half: h_new.clone(),
            value: left.value,
            err: left.err,
            split_axis: left.split_axis,
        };
        heap.push(HeapKey {
            err: left.err,
            idx,
        });
        let new_idx = cells.len();
        cells.push(Cell {
            center: c_right,
            half: h_new,
            value: right.value,
            err: right.err,
            split_axis: right.split_axis,
        });
        heap.push(HeapKey {
            err: right.err,
            idx: new_idx,
        });
    }

    // re-sum in creation order: independent of heap traversal history
    let mut value = ZERO;
    let mut err = 0.0;
    for c in &cells {
        value += c.value;
        err += c.err;
    }
    // the resummed error can differ from the running total by bookkeeping
    // rounding, so keep the loop's own tolerance decision
    let mut result = IntegralResult::finalize(value, err, evals, spec);
    result.converged |= met_tolerance;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::super::{integrate_nd, Domain, QuadratureSpec};
    use super::*;

    #[test]
    fn degree_seven_polynomial_is_exact() {
        // x^3 y^4 has total degree 7, so the rule is exact on every cell;
        // whatever subdivision the (degree-5 based) error estimate forces,
        // the summed result stays exact up to rounding
        let spec = QuadratureSpec::default_for_dim(2);
        let r = integrate_nd(
            |x| Complex64::new(x[0].powi(3) * x[1].powi(4), 0.0),
            2,
            &Domain::Box {
                lo: vec![0.0, -1.0],
                hi: vec![1.0, 2.0],
            },
            &spec,
        )
        .unwrap();
        // int_0^1 x^3 dx * int_{-1}^2 y^4 dy = (1/4)(33/5)
        let truth = 0.25 * 33.0 / 5.0;
        assert!(r.converged);
        assert!((r.value.re - truth).abs() < 1e-12 * truth);
        assert_eq!(r.evals % 17, 0); // 1 + 4d + 2d(d-1) + 2^d points at d = 2
    }

    #[test]
    fn separable_trigonometric_3d() {
        let spec = QuadratureSpec::default_for_dim(3).with_rel_tol(1e-10);
        let r = integrate_nd(
            |x| Complex64::new(libm::sin(x[0]) * libm::cos(x[1]) * libm::exp(x[2]), 0.0),
            3,
            &Domain::Box {
                lo: vec![0.0, 0.0, 0.0],
                hi: vec![1.0, 1.0, 1.0],
            },
            &spec,
        )
        .unwrap();
        let truth = (1.0 - libm::cos(1.0)) * libm::sin(1.0) * (core::f64::consts::E - 1.0);
        assert!(r.converged);
        assert!((r.value.re - truth).abs() < 1e-9 * truth);
    }

    #[test]
    fn complex_phase_factorizes() {
        // int_0^1 int_0^1 e^{i(x+y)} = (e^i - 1)^2 / i^2
        let spec = QuadratureSpec::default_for_dim(2).with_rel_tol(1e-10);
        let r = integrate_nd(
            |x| super::super::cis(x[0] + x[1]),
            2,
            &Domain::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            &spec,
        )
        .unwrap();
        let one_axis = (super::super::cis(1.0) - Complex64::new(1.0, 0.0))
            / Complex64::new(0.0, 1.0);
        let truth = one_axis * one_axis;
        assert!(r.converged);
        assert!(cabs(r.value - truth) < 1e-9);
    }

    #[test]
    fn gaussian_4d_matches_erf_product() {
        let spec = QuadratureSpec::default_for_dim(4).with_rel_tol(1e-7);
        let r = integrate_nd(
            |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Complex64::new(libm::exp(-r2), 0.0)
            },
            4,
            &Domain::Box {
                lo: vec![-1.0; 4],
                hi: vec![1.0; 4],
            },
            &spec,
        )
        .unwrap();
        let one_axis = libm::sqrt(core::f64::consts::PI) * libm::erf(1.0);
        let truth = one_axis.powi(4);
        assert!(r.converged);
        assert!(
            (r.value.re - truth).abs() < 1e-6 * truth,
            "{} vs {}",
            r.value.re,
            truth
        );
    }

    #[test]
    fn peaked_integrand_forces_subdivision_and_converges() {
        // narrow Gaussian bump off-centre
        let spec = QuadratureSpec::default_for_dim(2).with_rel_tol(1e-8);
        let s = 0.05;
        let r = integrate_nd(
            |x| {
                let dx = x[0] - 0.3;
                let dy = x[1] - 0.7;
                Complex64::new(libm::exp(-(dx * dx + dy * dy) / (2.0 * s * s)), 0.0)
            },
            2,
            &Domain::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            &spec,
        )
        .unwrap();
        let truth = 2.0 * core::f64::consts::PI * s * s; // bump far from edges
        assert!(r.converged);
        assert!(r.evals > 17, "subdivision must have happened");
        assert!(
            (r.value.re - truth).abs() < 1e-7 * truth,
            "{} vs {}",
            r.value.re,
            truth
        );
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let spec = QuadratureSpec {
            max_evals: 200,
            ..QuadratureSpec::default_for_dim(3)
        };
        let r = integrate_nd(
            |x| Complex64::new(libm::cos(40.0 * x[0]) * libm::cos(40.0 * x[1] * x[2]), 0.0),
            3,
            &Domain::Box {
                lo: vec![0.0; 3],
                hi: vec![3.0; 3],
            },
            &spec,
        )
        .unwrap();
        assert!(!r.converged);
        assert!(r.evals <= 200);
    }

    #[test]
    fn linearity_under_scaling() {
        let spec = QuadratureSpec::default_for_dim(2).with_rel_tol(1e-10);
        let dom = Domain::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        };
        let base = integrate_nd(
            |x| Complex64::new(libm::sin(3.0 * x[0] + x[1]), 0.0),
            2,
            &dom,
            &spec,
        )
        .unwrap();
        let scaled = integrate_nd(
            |x| Complex64::new(2.5 * libm::sin(3.0 * x[0] + x[1]), 0.0),
            2,
            &dom,
            &spec,
        )
        .unwrap();
        assert!((scaled.value.re - 2.5 * base.value.re).abs() < 1e-9);
    }

    #[test]
    fn deterministic_across_runs() {
        let spec = QuadratureSpec::default_for_dim(3).with_rel_tol(1e-7);
        let run = || {
            integrate_nd(
                |x| {
                    let r2: f64 = x.iter().map(|v| v * v).sum();
                    Complex64::new(libm::cos(4.0 * x[0]) * libm::exp(-r2), 0.0)
                },
                3,
                &Domain::Box {
                    lo: vec![-2.0; 3],
                    hi: vec![2.0; 3],
                },
                &spec,
            )
            .unwrap()
        };
        let r1 = run();
        let r2 = run();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.error_estimate, r2.error_estimate);
        assert_eq!(r1.evals, r2.evals);
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let spec = QuadratureSpec::default_for_dim(2);
        let r = integrate_nd(
            |x| Complex64::new(if x[0] > 0.9 { f64::NAN } else { 1.0 }, 0.0),
            2,
            &Domain::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            &spec,
        );
        assert_eq!(r.unwrap_err(), QuadratureError::NonFiniteIntegrand);
    }

    #[test]
    fn abscissae_match_their_defining_roots() {
        assert_eq!(LAMBDA2, libm::sqrt(9.0 / 70.0));
        assert_eq!(LAMBDA4, libm::sqrt(9.0 / 10.0));
        assert_eq!(LAMBDA5, libm::sqrt(9.0 / 19.0));
    }

    #[test]
    fn weights_average_to_one() {
        // with unit integrand every rule must reproduce the cell volume
        for dim in 2..=6 {
            let mut rule = Rule::new(dim);
            let center = vec![0.3; dim];
            let half = vec![0.4; dim];
            let mut f = |_: &[f64]| Complex64::new(1.0, 0.0);
            let out = rule.apply(&mut f, &center, &half).unwrap();
            let vol = 0.8f64.powi(dim as i32);
            assert!(
                (out.value.re - vol).abs() < 1e-13 * vol,
                "dim {dim}: {} vs {vol}",
                out.value.re
            );
            assert!(out.err < 1e-13);
        }
    }
}
