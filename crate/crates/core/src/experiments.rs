//! Randomized corroboration harness: sample hypersurfaces through random
//! curves, tally smoothness / typicality / very-freeness, keep replayable
//! witnesses, and check the linear-section lifting argument.
//!
//! Determinism contract: a trial's randomness comes from a dedicated
//! stream of a counter-based generator, derived from the master seed and
//! the trial index alone, so identical configurations produce identical
//! statistics and witnesses regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::binary::BinaryForm;
use crate::bundle::SplittingType;
use crate::config::linear_system_through;
use crate::curve::{contains_curve, smooth_along_curve, CurveBundles, Hypersurface, RationalCurve};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::json::{
    curve_from_dto, curve_to_dto, multi_form_from_dto, multi_form_to_dto, CurveDto, MultiFormDto,
};
use crate::multi::MultiForm;

fn default_height() -> u32 {
    10
}

/// Parameters of a randomized run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Ambient projective dimension.
    pub n: usize,
    /// Hypersurface degree.
    pub d: u32,
    /// Curve degree.
    pub e: u32,
    pub field: FieldSpec,
    pub trials: u64,
    pub seed: u64,
    /// Coefficient height bound for sampling over the rationals.
    #[serde(default = "default_height")]
    pub height: u32,
}

/// Tallies over all trials.  Every trial lands in exactly one of the
/// terminal outcomes; the auxiliary tallies (`curve_resamples`) count
/// rejected draws, not trials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialCounts {
    pub trials: u64,
    /// Component draws rejected before a valid curve appeared.
    pub curve_resamples: u64,
    pub on_hypersurface: u64,
    pub singular_along: u64,
    pub smooth_along: u64,
    pub not_immersion: u64,
    pub typical: u64,
    pub not_typical: u64,
    pub very_free: u64,
    pub errors: u64,
}

/// A replayable sample: the curve, the hypersurface through it, and the
/// splitting data computed during the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub category: String,
    pub trial: u64,
    pub field: FieldSpec,
    pub n: usize,
    pub curve: CurveDto,
    pub form: MultiFormDto,
    pub tangent: Option<SplittingType>,
    pub normal: Option<SplittingType>,
}

/// Result of a randomized run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStats {
    pub config: TrialConfig,
    pub counts: TrialCounts,
    pub witnesses: Vec<Witness>,
}

/// At most this many witnesses are stored per category.
pub const WITNESSES_PER_CATEGORY: usize = 5;

/// A uniformly random nonzero element of the linear system of degree-`d`
/// forms vanishing on the curve.
pub fn sample_hypersurface_containing<K: Field>(
    field: K,
    curve: &RationalCurve<K>,
    degree: u32,
    rng: &mut dyn RngCore,
    height: u32,
) -> Result<Hypersurface<K>> {
    let basis = linear_system_through(field, curve.n(), std::slice::from_ref(curve), degree)?;
    if basis.is_empty() {
        return Err(Error::EmptySystem);
    }
    for _ in 0..256 {
        let coeffs: Vec<K::Elem> = basis
            .iter()
            .map(|_| field.random_elem(rng, height))
            .collect();
        if coeffs.iter().all(|c| field.is_zero(c)) {
            continue;
        }
        let mut form = MultiForm::zero(field, curve.n() + 1, degree);
        for (c, b) in coeffs.iter().zip(basis.iter()) {
            if !field.is_zero(c) {
                form = form.add(&b.scale(c));
            }
        }
        return Hypersurface::new(field, curve.n(), form);
    }
    Err(Error::CheckFailed(
        "could not draw a nonzero combination from the linear system".into(),
    ))
}

/// A random curve of the given degree: independent random components,
/// resampled until they share no common factor.  Returns the curve and the
/// number of rejected draws.
pub fn sample_curve<K: Field>(
    field: K,
    n: usize,
    degree: u32,
    rng: &mut dyn RngCore,
    height: u32,
) -> Result<(RationalCurve<K>, u64)> {
    let mut rejected = 0;
    for _ in 0..256 {
        let comps: Vec<BinaryForm<K>> = (0..=n)
            .map(|_| BinaryForm::random(field, degree, rng, height))
            .collect();
        match RationalCurve::new(field, comps) {
            Ok(c) => return Ok((c, rejected)),
            Err(_) => rejected += 1,
        }
    }
    Err(Error::CheckFailed(
        "could not draw a curve without a common factor".into(),
    ))
}

struct WitnessStore {
    witnesses: Vec<Witness>,
}

impl WitnessStore {
    fn push<K: Field>(
        &mut self,
        category: &str,
        trial: u64,
        curve: &RationalCurve<K>,
        x: &Hypersurface<K>,
        tangent: Option<&SplittingType>,
        normal: Option<&SplittingType>,
    ) {
        let room = self
            .witnesses
            .iter()
            .filter(|w| w.category == category)
            .count()
            < WITNESSES_PER_CATEGORY;
        if !room {
            return;
        }
        self.witnesses.push(Witness {
            category: category.to_string(),
            trial,
            field: curve.field().spec(),
            n: curve.n(),
            curve: curve_to_dto(curve),
            form: multi_form_to_dto(x.form()),
            tangent: tangent.cloned(),
            normal: normal.cloned(),
        });
    }
}

/// Run the sampling harness: per trial, draw a curve, draw a hypersurface
/// through it, and tally smoothness, typicality (when the degrees allow
/// it), and very-freeness.  Splitting degree sums are audited against the
/// rank and first Chern class of the restricted tangent and normal bundles
/// on every pipeline run; a violation counts as an error.
pub fn very_free_search<K: Field>(field: K, cfg: &TrialConfig) -> Result<TrialStats> {
    if field.spec() != cfg.field {
        return Err(Error::BadInput(
            "the field handle does not match the configuration".into(),
        ));
    }
    if cfg.trials < 1 {
        return Err(Error::BadInput("at least one trial is needed".into()));
    }
    if cfg.n < 3 {
        return Err(Error::BadInput(
            "the harness needs ambient dimension at least 3".into(),
        ));
    }
    if cfg.e < 1 || cfg.d < 1 {
        return Err(Error::BadInput("degrees must be at least 1".into()));
    }
    let mut counts = TrialCounts::default();
    let mut store = WitnessStore {
        witnesses: Vec::new(),
    };
    let n = cfg.n;
    let tally_typicality = cfg.d as usize == n && cfg.e as usize <= n;
    for trial in 0..cfg.trials {
        counts.trials += 1;
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial);
        let (curve, rejected) = match sample_curve(field, n, cfg.e, &mut rng, cfg.height) {
            Ok(r) => r,
            Err(_) => {
                counts.errors += 1;
                continue;
            }
        };
        counts.curve_resamples += rejected;
        let x = match sample_hypersurface_containing(field, &curve, cfg.d, &mut rng, cfg.height) {
            Ok(x) => x,
            Err(_) => {
                counts.errors += 1;
                continue;
            }
        };
        debug_assert!(contains_curve(&x, &curve).unwrap_or(false));
        counts.on_hypersurface += 1;
        match smooth_along_curve(&x, &curve) {
            Ok(true) => counts.smooth_along += 1,
            Ok(false) => {
                counts.singular_along += 1;
                store.push("singular_along", trial, &curve, &x, None, None);
                continue;
            }
            Err(_) => {
                counts.errors += 1;
                continue;
            }
        }
        if !curve.is_immersion() {
            counts.not_immersion += 1;
            continue;
        }
        let bundles = match CurveBundles::new(x.clone(), curve.clone()) {
            Ok(b) => b,
            Err(_) => {
                counts.errors += 1;
                continue;
            }
        };
        let tangent = bundles.tangent_splitting();
        let normal = bundles.normal_splitting();
        let expected_c1 = cfg.e as i64 * (n as i64 + 1 - cfg.d as i64);
        let conserved = tangent.rank() == n - 1
            && tangent.c1() == expected_c1
            && normal.rank() == n - 2
            && normal.c1() == expected_c1 - 2;
        if !conserved {
            counts.errors += 1;
            store.push(
                "conservation_violation",
                trial,
                &curve,
                &x,
                Some(&tangent),
                Some(&normal),
            );
            continue;
        }
        if tally_typicality {
            match bundles.is_typical() {
                Ok(report) => {
                    if report.typical {
                        counts.typical += 1;
                        store.push("typical", trial, &curve, &x, Some(&tangent), Some(&normal));
                    } else {
                        counts.not_typical += 1;
                        store.push(
                            "not_typical",
                            trial,
                            &curve,
                            &x,
                            Some(&tangent),
                            Some(&normal),
                        );
                    }
                }
                Err(_) => {
                    counts.errors += 1;
                    continue;
                }
            }
        }
        if bundles.is_very_free() {
            counts.very_free += 1;
            store.push("very_free", trial, &curve, &x, Some(&tangent), Some(&normal));
        }
    }
    Ok(TrialStats {
        config: cfg.clone(),
        counts,
        witnesses: store.witnesses,
    })
}

/// Recompute a stored witness from its serialized data and confirm that
/// its category and splitting data still hold.
pub fn re_verify_witness<K: Field>(field: K, w: &Witness) -> Result<bool> {
    if field.spec() != w.field {
        return Err(Error::BadInput(
            "the field handle does not match the witness".into(),
        ));
    }
    let curve = curve_from_dto(field, &w.curve)?;
    let form = multi_form_from_dto(field, &w.form)?;
    let x = Hypersurface::new(field, w.n, form)?;
    if !contains_curve(&x, &curve)? {
        return Ok(false);
    }
    match w.category.as_str() {
        "singular_along" => Ok(!smooth_along_curve(&x, &curve)?),
        "very_free" | "typical" | "not_typical" | "conservation_violation" => {
            let bundles = CurveBundles::new(x, curve)?;
            let tangent = bundles.tangent_splitting();
            let normal = bundles.normal_splitting();
            if let Some(expected) = &w.tangent {
                if &tangent != expected {
                    return Ok(false);
                }
            }
            if let Some(expected) = &w.normal {
                if &normal != expected {
                    return Ok(false);
                }
            }
            match w.category.as_str() {
                "very_free" => Ok(bundles.is_very_free()),
                "typical" => Ok(bundles.is_typical()?.typical),
                "not_typical" => Ok(!bundles.is_typical()?.typical),
                _ => Ok(true),
            }
        }
        other => Err(Error::BadInput(format!("unknown witness category {other:?}"))),
    }
}

/// Result of the linear-section lifting check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionLiftReport {
    /// Splitting of the restricted tangent bundle inside the section
    /// hypersurface (`None` when the section is a conic, where ampleness
    /// is automatic).
    pub section_tangent: Option<SplittingType>,
    /// Splitting of the restricted tangent bundle of the ambient
    /// hypersurface.
    pub ambient_tangent: SplittingType,
    /// Whether every ambient summand has degree at least 1.
    pub very_free_in_ambient: bool,
}

/// Restrict a form to a coordinate linear subspace: variables outside
/// `vars` are set to zero and the survivors are reindexed in order.
fn restrict_form<K: Field>(
    form: &MultiForm<K>,
    vars: &[usize],
) -> Result<MultiForm<K>> {
    let field = form.field();
    let keep: std::collections::BTreeSet<usize> = vars.iter().copied().collect();
    let mut out = MultiForm::zero(field, vars.len(), form.degree());
    for (exp, c) in form.terms() {
        if exp
            .iter()
            .enumerate()
            .any(|(i, &e)| e > 0 && !keep.contains(&i))
        {
            continue;
        }
        let restricted: Vec<u32> = vars.iter().map(|&i| exp[i]).collect();
        out.add_term(&restricted, c.clone())?;
    }
    Ok(out)
}

/// Check the lifting argument: a curve that is very free inside a
/// coordinate linear section of a hypersurface of degree below the section
/// dimension should stay very free in the hypersurface itself.  The
/// ambient splitting is computed, never assumed; the report carries the
/// actual multiset.
pub fn section_lift_check<K: Field>(
    ambient: &Hypersurface<K>,
    section_vars: &[usize],
    curve_in_section: &RationalCurve<K>,
) -> Result<SectionLiftReport> {
    let field = ambient.field();
    let n = ambient.n();
    let d = ambient.degree() as usize;
    if d >= n {
        return Err(Error::BadInput(
            "the section argument needs the degree below the ambient dimension".into(),
        ));
    }
    if section_vars.len() != d + 1 {
        return Err(Error::BadInput(format!(
            "a degree-{d} hypersurface needs a section through {} coordinates",
            d + 1
        )));
    }
    if section_vars.windows(2).any(|w| w[0] >= w[1])
        || section_vars.iter().any(|&v| v > n)
    {
        return Err(Error::BadInput(
            "section coordinates must be strictly increasing indices into the ambient space"
                .into(),
        ));
    }
    if curve_in_section.n() != d {
        return Err(Error::BadInput(format!(
            "the section curve must live in dimension {d}"
        )));
    }
    let restricted = restrict_form(ambient.form(), section_vars)?;
    if restricted.is_zero() {
        return Err(Error::BadInput(
            "the hypersurface contains the whole section".into(),
        ));
    }
    // Very-freeness inside the section.
    let section_tangent = if d == 2 {
        // The section is a conic in the plane: a smoothly parametrized
        // smooth conic is rational with ample tangent bundle, so
        // very-freeness needs no splitting computation.
        let section = Hypersurface::new(field, 2, restricted)?;
        if !contains_curve(&section, curve_in_section)? {
            return Err(Error::CurveNotOnHypersurface);
        }
        let ok = curve_in_section.degree() == 2
            && smooth_along_curve(&section, curve_in_section)?
            && curve_in_section.is_immersion();
        if !ok {
            return Err(Error::PreconditionFailed(
                "the section curve is not a smooth parametrization of a smooth conic".into(),
            ));
        }
        None
    } else {
        let section = Hypersurface::new(field, d, restricted)?;
        let bundles = CurveBundles::new(section, curve_in_section.clone())?;
        if !bundles.is_very_free() {
            return Err(Error::PreconditionFailed(format!(
                "the section curve is not very free there: tangent splitting {}",
                bundles.tangent_splitting()
            )));
        }
        Some(bundles.tangent_splitting())
    };
    // Lift the curve to the ambient space and recompute.
    let mut lifted = vec![BinaryForm::zero(field); n + 1];
    for (slot, &v) in section_vars.iter().enumerate() {
        lifted[v] = curve_in_section.components()[slot].clone();
    }
    let lifted = RationalCurve::new(field, lifted)?;
    let bundles = CurveBundles::new(ambient.clone(), lifted)?;
    let ambient_tangent = bundles.tangent_splitting();
    Ok(SectionLiftReport {
        section_tangent,
        very_free_in_ambient: ambient_tangent.all_at_least(1),
        ambient_tangent,
    })
}
