//! `assoc-check`, `reflection-check`, `wick`: exactness properties of the
//! twisted products and the pairing combinatorics.
//!
//! The off-shell star phase is bilinear in the labels, so its
//! associativity and joint-reflection defects vanish identically — the
//! checks assert exact zeros, not small numbers. The on-shell lift breaks
//! both, and each check pins one fixed reference value as a regression
//! anchor: the anchors are evaluated at unit mass with the standard
//! two-block twist regardless of the configured run parameters.

use nclab_core::kernels::TwistKind;
use nclab_core::spacetime::{FourVector, Mass, ThetaMatrix};
use nclab_core::twist::{
    associativity_defect, moyal_associativity_defect, reflection_defect_ft, wick_pairings,
};
use serde_json::json;

use crate::config::Settings;
use crate::report::{fmt_f64, Csv, Output};
use crate::sampling::Sampler;
use crate::CliError;

/// On-shell associativity defect at the fixed reference triple (unit
/// spatial axes, unit mass, standard twist, scale 1/2).
pub const ASSOC_ANCHOR: f64 = 0.5481881585886565;
/// On-shell reflection defect at the fixed reference pair (unit momenta on
/// the first two spatial axes, unit mass, standard twist).
pub const REFLECTION_ANCHOR: f64 = 0.4938829729963678;
pub const ANCHOR_TOL: f64 = 1e-12;

#[derive(clap::Args, Debug, Default)]
pub struct AssocArgs {
    /// Number of random triples (default 1000)
    #[arg(long)]
    pub triples: Option<usize>,
    /// Phase scale of the product (default 0.5)
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(clap::Args, Debug, Default)]
pub struct ReflectArgs {
    /// Number of random momentum pairs (default 1000)
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(clap::Args, Debug, Default)]
pub struct WickArgs {
    /// Number of fields to pair (default 6; odd counts have no pairings)
    #[arg(long)]
    pub n2: Option<usize>,
}

fn anchor_theta() -> Result<ThetaMatrix, CliError> {
    ThetaMatrix::standard(1.0, 1.0).map_err(|_| CliError::Config("anchor theta failed".into()))
}

fn anchor_mass() -> Result<Mass, CliError> {
    Mass::new(1.0).map_err(|_| CliError::Config("anchor mass failed".into()))
}

pub fn run_assoc(settings: &Settings, args: &AssocArgs) -> Result<Output, CliError> {
    let triples = args.triples.unwrap_or(1000);
    let scale = args.scale.unwrap_or(0.5);
    if triples == 0 {
        return Err(CliError::Config("--triples must be positive".into()));
    }
    if !(scale.is_finite() && scale != 0.0) {
        return Err(CliError::Config("--scale must be finite and nonzero".into()));
    }

    let mut sampler = Sampler::new(settings.seed);

    // Off-shell: bilinear phase, so the defect is exactly zero for every
    // triple; any nonzero value fails immediately.
    let mut offshell_max = 0.0f64;
    for _ in 0..triples {
        let a = sampler.minkowski4(3.0);
        let b = sampler.minkowski4(3.0);
        let c = sampler.minkowski4(3.0);
        let d = moyal_associativity_defect(&a, &b, &c, &settings.theta, scale)
            .map_err(crate::core_error)?;
        offshell_max = offshell_max.max(d);
    }

    // On-shell: record the defect distribution on random spatial triples.
    let mut rows = Vec::new();
    let mut onshell_max = 0.0f64;
    let mut onshell_sum = 0.0f64;
    for idx in 0..triples {
        let a = sampler.spatial(2.0);
        let b = sampler.spatial(2.0);
        let c = sampler.spatial(2.0);
        let d = associativity_defect(&a, &b, &c, settings.mass, &settings.theta, scale)
            .map_err(crate::core_error)?;
        onshell_max = onshell_max.max(d);
        onshell_sum += d;
        let (ca, cb, cc) = (a.components(), b.components(), c.components());
        rows.push(vec![
            idx.to_string(),
            fmt_f64(ca[0]),
            fmt_f64(ca[1]),
            fmt_f64(ca[2]),
            fmt_f64(cb[0]),
            fmt_f64(cb[1]),
            fmt_f64(cb[2]),
            fmt_f64(cc[0]),
            fmt_f64(cc[1]),
            fmt_f64(cc[2]),
            fmt_f64(d),
        ]);
    }

    // Fixed-reference regression anchor, independent of the run config.
    let ex = nclab_core::spacetime::SpatialVector::new([1.0, 0.0, 0.0])
        .map_err(|_| CliError::Config("anchor vector failed".into()))?;
    let ey = nclab_core::spacetime::SpatialVector::new([0.0, 1.0, 0.0])
        .map_err(|_| CliError::Config("anchor vector failed".into()))?;
    let ez = nclab_core::spacetime::SpatialVector::new([0.0, 0.0, 1.0])
        .map_err(|_| CliError::Config("anchor vector failed".into()))?;
    let anchor = associativity_defect(&ex, &ey, &ez, anchor_mass()?, &anchor_theta()?, 0.5)
        .map_err(crate::core_error)?;
    let anchor_err = (anchor - ASSOC_ANCHOR).abs();

    let pass = offshell_max == 0.0 && anchor_err <= ANCHOR_TOL && anchor > 0.0;
    let results = json!({
        "triples": triples,
        "scale": scale,
        "offshellMaxDefect": offshell_max,
        "onshellMaxDefect": onshell_max,
        "onshellMeanDefect": onshell_sum / triples as f64,
        "anchor": {"value": anchor, "reference": ASSOC_ANCHOR, "absErr": anchor_err, "tol": ANCHOR_TOL},
    });
    let csv = Csv {
        comment: "on-shell star-product associativity defect |phase((a*b)*c) - phase(a*(b*c))| on random spatial triples\n\
                  columns: triple index, a, b, c (3 components each), defect"
            .into(),
        header: vec![
            "triple", "a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3", "defect",
        ],
        rows,
    };

    Ok(Output {
        command: "assoc-check",
        pass,
        results,
        csv: Some(csv),
        plots: Vec::new(),
        summary: vec![
            format!("off-shell defect over {triples} triples: max = {offshell_max} (must be exactly 0)"),
            format!(
                "on-shell defect: max {onshell_max:.6}, mean {:.6}; anchor |err| = {anchor_err:.2e}",
                onshell_sum / triples as f64
            ),
        ],
    })
}

pub fn run_reflection(settings: &Settings, args: &ReflectArgs) -> Result<Output, CliError> {
    let points = args.points.unwrap_or(1000);
    if points == 0 {
        return Err(CliError::Config("--points must be positive".into()));
    }

    let mut sampler = Sampler::new(settings.seed);

    // Untwisted and off-shell pair kernels are even under joint momentum
    // reflection: the defect must be exactly zero.
    let mut plain_max = 0.0f64;
    let mut offshell_max = 0.0f64;
    for _ in 0..points {
        let k = sampler.euclidean4(3.0);
        let p = sampler.euclidean4(3.0);
        let d0 = reflection_defect_ft(&k, &p, settings.mass, &settings.theta, TwistKind::None)
            .map_err(crate::core_error)?;
        let d1 = reflection_defect_ft(&k, &p, settings.mass, &settings.theta, TwistKind::OffShell)
            .map_err(crate::core_error)?;
        plain_max = plain_max.max(d0);
        offshell_max = offshell_max.max(d1);
    }

    // On-shell lift: positive frequency survives the reflection, so the
    // defect is generically positive; record its distribution.
    let mut rows = Vec::new();
    let mut onshell_max = 0.0f64;
    let mut onshell_sum = 0.0f64;
    for idx in 0..points {
        let k = sampler.euclidean4(3.0);
        let p = sampler.euclidean4(3.0);
        let d = reflection_defect_ft(&k, &p, settings.mass, &settings.theta, TwistKind::OnShell)
            .map_err(crate::core_error)?;
        onshell_max = onshell_max.max(d);
        onshell_sum += d;
        let (ck, cp) = (k.components(), p.components());
        rows.push(vec![
            idx.to_string(),
            fmt_f64(ck[0]),
            fmt_f64(ck[1]),
            fmt_f64(ck[2]),
            fmt_f64(ck[3]),
            fmt_f64(cp[0]),
            fmt_f64(cp[1]),
            fmt_f64(cp[2]),
            fmt_f64(cp[3]),
            fmt_f64(d),
        ]);
    }

    let anchor_k = FourVector::euclidean([1.0, 0.0, 0.0], 0.0)
        .map_err(|_| CliError::Config("anchor momentum failed".into()))?;
    let anchor_p = FourVector::euclidean([0.0, 1.0, 0.0], 0.0)
        .map_err(|_| CliError::Config("anchor momentum failed".into()))?;
    let anchor = reflection_defect_ft(
        &anchor_k,
        &anchor_p,
        anchor_mass()?,
        &anchor_theta()?,
        TwistKind::OnShell,
    )
    .map_err(crate::core_error)?;
    let anchor_err = (anchor - REFLECTION_ANCHOR).abs();

    let pass = plain_max == 0.0 && offshell_max == 0.0 && anchor_err <= ANCHOR_TOL && anchor > 0.0;
    let results = json!({
        "points": points,
        "plainMaxDefect": plain_max,
        "offshellMaxDefect": offshell_max,
        "onshellMaxDefect": onshell_max,
        "onshellMeanDefect": onshell_sum / points as f64,
        "anchor": {"value": anchor, "reference": REFLECTION_ANCHOR, "absErr": anchor_err, "tol": ANCHOR_TOL},
    });
    let csv = Csv {
        comment: "on-shell pair-kernel reflection defect |K(k,p) - K(-k,-p)| on random Euclidean pairs\n\
                  columns: pair index, k (4 components), p (4 components), defect"
            .into(),
        header: vec![
            "pair", "k4", "k1", "k2", "k3", "p4", "p1", "p2", "p3", "defect",
        ],
        rows,
    };

    Ok(Output {
        command: "reflection-check",
        pass,
        results,
        csv: Some(csv),
        plots: Vec::new(),
        summary: vec![
            format!(
                "untwisted/off-shell defects over {points} pairs: max = {plain_max} / {offshell_max} (must be exactly 0)"
            ),
            format!(
                "on-shell defect: max {onshell_max:.6}, mean {:.6}; anchor |err| = {anchor_err:.2e}",
                onshell_sum / points as f64
            ),
        ],
    })
}

pub fn run_wick(_settings: &Settings, args: &WickArgs) -> Result<Output, CliError> {
    let n2 = args.n2.unwrap_or(6);
    let pairings = wick_pairings(n2).map_err(|_| {
        CliError::Config(format!(
            "--n2: pairings are enumerated for 0 <= n2 <= 12, got {n2}"
        ))
    })?;

    // (n2 - 1)!! perfect matchings for even n2, none for odd.
    let expected: usize = if n2 % 2 == 1 {
        0
    } else {
        (1..n2).step_by(2).product()
    };
    let count_ok = pairings.len() == expected;

    // Every pairing must be a perfect matching: each index once, pairs
    // ordered, pairings distinct.
    let mut all_matchings = true;
    for p in &pairings {
        let mut seen = vec![false; n2 + 1];
        for &(i, j) in &p.pairs {
            if !(1 <= i && i < j && j <= n2) || seen[i] || seen[j] {
                all_matchings = false;
            }
            if i <= n2 {
                seen[i] = true;
            }
            if j <= n2 {
                seen[j] = true;
            }
        }
        all_matchings &= p.pairs.len() == n2 / 2;
    }

    let rows: Vec<Vec<String>> = pairings
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let text: String = p
                .pairs
                .iter()
                .map(|(i, j)| format!("({i},{j})"))
                .collect();
            vec![idx.to_string(), text]
        })
        .collect();

    let pass = count_ok && all_matchings;
    let results = json!({
        "n2": n2,
        "count": pairings.len(),
        "expected": expected,
        "allPerfectMatchings": all_matchings,
    });
    let csv = Csv {
        comment: "perfect pair partitions of 1..n2 (field contractions); count is (n2-1)!! for even n2\n\
                  columns: pairing index, pairs"
            .into(),
        header: vec!["pairing", "pairs"],
        rows,
    };

    Ok(Output {
        command: "wick",
        pass,
        results,
        csv: Some(csv),
        plots: Vec::new(),
        summary: vec![format!(
            "n2={n2}: {} pairings (expected {expected}), all perfect matchings = {all_matchings}",
            pairings.len()
        )],
    })
}
