//! Adaptive Gauss–Kronrod integration with Wynn-epsilon extrapolation,
//! following the classic globally adaptive subdivision strategy: bisect the
//! interval with the largest error estimate, and when subdivision stalls on a
//! shrinking region (endpoint singularity, mapped infinite tail, undamped
//! oscillation), accelerate the sequence of global estimates instead.
//!
//! Differences from the textbook real-valued routine: integrand values are
//! complex (error magnitudes use the complex modulus, and the extrapolation
//! table runs over complex entries), the interval ordering uses an exactly
//! sorted set with index tie-breaking for determinism, and the final value is
//! re-summed in interval-creation order so results are bit-stable.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::qk::{qk15, QK15_EVALS};
use super::{cabs, IntegralResult, QuadratureError, QuadratureSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const OFLOW: f64 = f64::MAX;

#[derive(Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
}

/// Ordering key: largest error first, oldest interval on ties.
#[derive(Clone, Copy, PartialEq)]
struct ErrKey {
    err: f64,
    idx: usize,
}

impl Eq for ErrKey {}

impl Ord for ErrKey {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .err
            .total_cmp(&self.err)
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for ErrKey {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Epsilon-algorithm table over complex entries.
pub(crate) struct EpsTable {
    table: [Complex64; 52],
    /// Number of live entries (the sequence length).
    n: usize,
    res3la: [Complex64; 3],
    nres: usize,
}

const LIMEXP: usize = 50;

impl EpsTable {
    pub(crate) fn new(first: Complex64) -> Self {
        let mut t = EpsTable {
            table: [ZERO; 52],
            n: 1,
            res3la: [ZERO; 3],
            nres: 0,
        };
        t.table[0] = first;
        t
    }

    pub(crate) fn push(&mut self, x: Complex64) {
        debug_assert!(self.n < 51);
        self.table[self.n] = x;
        self.n += 1;
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    /// One sweep of the epsilon algorithm over the current sequence.
    /// Returns the best extrapolated value and its error estimate (huge
    /// until enough history has accumulated).
    pub(crate) fn extrapolate(&mut self) -> (Complex64, f64) {
        let epmach = f64::EPSILON;
        self.nres += 1;
        let n0 = self.n;
        let mut result = self.table[n0 - 1];
        let mut abserr = OFLOW;
        if n0 < 3 {
            return (result, f64::max(abserr, 5.0 * epmach * cabs(result)));
        }
        self.table[n0 + 1] = self.table[n0 - 1];
        let newelm = (n0 - 1) / 2;
        self.table[n0 - 1] = Complex64::new(OFLOW, 0.0);
        let num = n0;
        let mut n = n0;
        let mut k1 = n0; // 1-based column pointer
        for i in 1..=newelm {
            let k2 = k1 - 1;
            let k3 = k1 - 2;
            let res = self.table[k1 + 1];
            let e0 = self.table[k3 - 1];
            let e1 = self.table[k2 - 1];
            let e2 = res;
            let e1abs = cabs(e1);
            let delta2 = e2 - e1;
            let err2 = cabs(delta2);
            let tol2 = f64::max(cabs(e2), e1abs) * epmach;
            let delta3 = e1 - e0;
            let err3 = cabs(delta3);
            let tol3 = f64::max(e1abs, cabs(e0)) * epmach;
            if err2 <= tol2 && err3 <= tol3 {
                // convergence within machine accuracy
                return (res, f64::max(err2 + err3, 5.0 * epmach * cabs(res)));
            }
            let e3 = self.table[k1 - 1];
            self.table[k1 - 1] = e1;
            let delta1 = e1 - e3;
            let err1 = cabs(delta1);
            let tol1 = f64::max(e1abs, cabs(e3)) * epmach;
            // a denominator close to zero or an irregular sequence stops the
            // diagonal; keep the part of the table built so far
            if err1 <= tol1 || err2 <= tol2 || err3 <= tol3 {
                n = 2 * i - 1;
                break;
            }
            let ss = delta1.inv() + delta2.inv() - delta3.inv();
            let epsinf = cabs(ss * e1);
            if epsinf <= 1e-4 {
                n = 2 * i - 1;
                break;
            }
            let res_new = e1 + ss.inv();
            self.table[k1 - 1] = res_new;
            k1 -= 2;
            let error = err2 + cabs(res_new - e2) + err3;
            if error <= abserr {
                abserr = error;
                result = res_new;
            }
        }
        // shift the table for the next call
        if n == LIMEXP {
            n = 2 * (LIMEXP / 2) - 1;
        }
        let mut ib = if num % 2 == 0 { 2 } else { 1 };
        let ie = newelm + 1;
        for _ in 1..=ie {
            self.table[ib - 1] = self.table[ib + 1];
            ib += 2;
        }
        if num != n {
            self.table.copy_within(num - n..num, 0);
        }
        self.n = n;
        if self.nres < 4 {
            self.res3la[self.nres - 1] = result;
            return (result, OFLOW);
        }
        abserr = cabs(result - self.res3la[2])
            + cabs(result - self.res3la[1])
            + cabs(result - self.res3la[0]);
        self.res3la[0] = self.res3la[1];
        self.res3la[1] = self.res3la[2];
        self.res3la[2] = result;
        (result, f64::max(abserr, 5.0 * epmach * cabs(result)))
    }
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
pub fn qags<F>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    let epmach = f64::EPSILON;
    let epsabs = spec.abs_tol;
    let epsrel = spec.rel_tol;
    let limit = spec
        .subdivision_limit
        .min((spec.max_evals / (2 * QK15_EVALS)).max(1) as usize)
        .max(1);

    let r0 = qk15(f, a, b)?;
    let mut evals = QK15_EVALS;
    let dres = cabs(r0.value);
    let defabs = r0.resabs;
    let mut errbnd = f64::max(epsabs, epsrel * dres);

    let mut ier: u8 = 0;
    if r0.abserr <= 100.0 * epmach * defabs && r0.abserr > errbnd {
        ier = 2; // roundoff prevents the requested tolerance
    }
    if limit == 1 {
        ier = 1;
    }
    if ier != 0 || (r0.abserr <= errbnd && r0.abserr != r0.resasc) || r0.abserr == 0.0 {
        let mut out = IntegralResult::finalize(r0.value, r0.abserr, evals, spec);
        if ier != 0 {
            out.converged = false;
        }
        return Ok(out);
    }

    let mut intervals: Vec<Interval> = Vec::with_capacity(64);
    intervals.push(Interval {
        a,
        b,
        value: r0.value,
    });
    let mut order: BTreeSet<ErrKey> = BTreeSet::new();
    order.insert(ErrKey {
        err: r0.abserr,
        idx: 0,
    });

    let mut area = r0.value;
    let mut errsum = r0.abserr;

    let mut eps = EpsTable::new(r0.value);
    let mut result_ext = r0.value; // best extrapolated value
    let mut abserr_ext = OFLOW;

    let mut small = 0.375 * (b - a).abs();
    let mut erlarg = errsum;
    let mut ertest = errbnd;
    let mut extrap = false;
    let mut noext = false;
    let mut ktmin = 0u32;
    let (mut iroff1, mut iroff2, mut iroff3) = (0u32, 0u32, 0u32);
    let mut ierro: u8 = 0;
    let mut correc = 0.0;
    let mut nrmax = 1usize;

    let ksgn = if dres >= (1.0 - 50.0 * epmach) * defabs {
        1
    } else {
        -1
    };

    'main: loop {
        let last = intervals.len();
        if last >= limit {
            ier = 1;
            break;
        }
        if evals + 2 * QK15_EVALS > spec.max_evals {
            ier = 1;
            break;
        }

        // interval to bisect: nrmax-th largest error
        let key = match order.iter().nth(nrmax - 1) {
            Some(k) => *k,
            None => break,
        };
        let maxerr_idx = key.idx;
        let errmax = key.err;
        let iv = intervals[maxerr_idx];

        let mid = 0.5 * (iv.a + iv.b);
        let r1 = qk15(f, iv.a, mid)?;
        let r2 = qk15(f, mid, iv.b)?;
        evals += 2 * QK15_EVALS;

        let area12 = r1.value + r2.value;
        let erro12 = r1.abserr + r2.abserr;
        errsum += erro12 - errmax;
        area += area12 - iv.value;

        if r1.resasc != r1.abserr && r2.resasc != r2.abserr {
            if cabs(iv.value - area12) <= 1e-5 * cabs(area12) && erro12 >= 0.99 * errmax {
                if extrap {
                    iroff2 += 1;
                } else {
                    iroff1 += 1;
                }
            }
            if intervals.len() > 10 && erro12 > errmax {
                iroff3 += 1;
            }
        }

        errbnd = f64::max(epsabs, epsrel * cabs(area));
        if iroff1 + iroff2 >= 10 || iroff3 >= 20 {
            ier = 2;
        }
        if iroff2 >= 5 {
            ierro = 3;
        }
        // interval shrunk to machine scale around a point: further
        // subdivision cannot help
        if f64::max(iv.a.abs(), iv.b.abs())
            <= (1.0 + 100.0 * epmach) * (mid.abs() + 1000.0 * f64::MIN_POSITIVE)
        {
            ier = 4;
        }

        // replace the parent with its left child, append the right child
        intervals[maxerr_idx] = Interval {
            a: iv.a,
            b: mid,
            value: r1.value,
        };
        let idx2 = intervals.len();
        intervals.push(Interval {
            a: mid,
            b: iv.b,
            value: r2.value,
        });
        order.remove(&key);
        order.insert(ErrKey {
            err: r1.abserr,
            idx: maxerr_idx,
        });
        order.insert(ErrKey {
            err: r2.abserr,
            idx: idx2,
        });

        if errsum <= errbnd {
            // straight adaptive convergence: sum in creation order
            let total = sum_intervals(&intervals);
            return Ok(IntegralResult::finalize(total, errsum, evals, spec));
        }
        if ier != 0 {
            break;
        }
        if intervals.len() == 2 {
            small = 0.375 * (b - a).abs();
            erlarg = errsum;
            ertest = errbnd;
            eps.push(area);
            continue;
        }
        if noext {
            continue;
        }

        erlarg -= errmax;
        if (mid - iv.a).abs() > small {
            erlarg += erro12;
        }

        if !extrap {
            // keep plain subdivision while some interval larger than the
            // current resolution scale remains on top
            let top = order.iter().next().map(|k| k.idx).unwrap_or(maxerr_idx);
            let tiv = intervals[top];
            if (tiv.b - tiv.a).abs() > small {
                continue;
            }
            extrap = true;
            nrmax = 2;
        }

        // if large intervals still dominate the error, bisect those first
        if ierro != 3 && erlarg > ertest {
            let jupbnd = if intervals.len() > 2 + limit / 2 {
                limit + 3 - intervals.len()
            } else {
                intervals.len()
            };
            let mut found_large = false;
            while nrmax <= jupbnd {
                let k = match order.iter().nth(nrmax - 1) {
                    Some(k) => *k,
                    None => break,
                };
                let iv = intervals[k.idx];
                if (iv.b - iv.a).abs() > small {
                    found_large = true;
                    break;
                }
                nrmax += 1;
            }
            if found_large {
                continue 'main;
            }
        }

        // extrapolate the sequence of global estimates
        eps.push(area);
        let (reseps, abseps) = eps.extrapolate();
        ktmin += 1;
        if ktmin > 5 && abserr_ext < 1e-3 * errsum {
            ier = 5;
        }
        if abseps < abserr_ext {
            ktmin = 0;
            abserr_ext = abseps;
            result_ext = reseps;
            correc = erlarg;
            ertest = f64::max(epsabs, epsrel * cabs(reseps));
            if abserr_ext <= ertest {
                break;
            }
        }
        if eps.len() == 1 {
            noext = true;
        }
        if ier == 5 {
            break;
        }
        nrmax = 1;
        extrap = false;
        small *= 0.5;
        erlarg = errsum;
    }

    // final result selection
    let mut result;
    let mut abserr;
    if abserr_ext == OFLOW {
        result = sum_intervals(&intervals);
        abserr = errsum;
    } else {
        result = result_ext;
        abserr = abserr_ext;
        let mut use_sum = false;
        if ier + ierro != 0 {
            if ierro == 3 {
                abserr += correc;
            }
            if ier == 0 {
                ier = 3;
            }
            if result == ZERO || area == ZERO {
                if abserr > errsum {
                    use_sum = true;
                } else if area != ZERO {
                    use_sum = false;
                }
                // area == 0 and abserr <= errsum: keep extrapolated result
            } else if abserr / cabs(result) > errsum / cabs(area) {
                use_sum = true;
            }
        }
        if !use_sum {
            // divergence test
            let big = f64::max(cabs(result), cabs(area));
            if !(ksgn == -1 && big <= defabs * 0.01) {
                let ratio = if area == ZERO {
                    0.0
                } else {
                    cabs(result) / cabs(area)
                };
                if !(0.01..=100.0).contains(&ratio) || errsum > cabs(area) {
                    ier = 6;
                }
            }
        } else {
            result = sum_intervals(&intervals);
            abserr = errsum;
        }
    }

    let mut out = IntegralResult::finalize(result, abserr, evals, spec);
    if ier == 6 {
        out.converged = false;
    }
    Ok(out)
}

fn sum_intervals(intervals: &[Interval]) -> Complex64 {
    let mut total = ZERO;
    for iv in intervals {
        total += iv.value;
    }
    total
}
