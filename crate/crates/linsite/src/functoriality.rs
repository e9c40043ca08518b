//! Property checkers for functors between finite sites: continuity,
//! cocontinuity, and the generating/fullness/faithfulness-up-to-cover
//! conditions whose conjunction with topology compatibility makes a functor
//! induce an equivalence of sheaf categories.
//!
//! The fullness and faithfulness conditions quantify over all vectors of
//! the relevant hom spaces and kernels, not just bases: whether the
//! associated sieve is covering is not linear in the morphism, so basis
//! sampling would be unsound. All checkers are deterministic and report
//! replayable counterexample data.

use crate::cat::{LinearFunctor, PresheafModule};
use crate::linalg::{Caps, Scalar, Subspace};
use crate::sheaf::SheafTester;
use crate::sieve::Sieve;
use crate::topology::CoverSystem;
use crate::{Error, Result};

/// A functor together with cover systems on its source and target.
#[derive(Debug, Clone)]
pub struct SiteMorphism {
    functor: LinearFunctor,
    source_system: CoverSystem,
    target_system: CoverSystem,
}

impl SiteMorphism {
    pub fn new(
        functor: LinearFunctor,
        source_system: CoverSystem,
        target_system: CoverSystem,
    ) -> Result<SiteMorphism> {
        if functor.source().as_ref() != source_system.category().as_ref()
            || functor.target().as_ref() != target_system.category().as_ref()
        {
            return Err(Error::Precondition {
                what: "site morphism: functor endpoints do not match the systems".into(),
            });
        }
        Ok(SiteMorphism { functor, source_system, target_system })
    }

    pub fn identity(system: &CoverSystem) -> SiteMorphism {
        SiteMorphism {
            functor: LinearFunctor::identity(system.category()),
            source_system: system.clone(),
            target_system: system.clone(),
        }
    }

    pub fn functor(&self) -> &LinearFunctor {
        &self.functor
    }

    pub fn source_system(&self) -> &CoverSystem {
        &self.source_system
    }

    pub fn target_system(&self) -> &CoverSystem {
        &self.target_system
    }
}

/// The property a report speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FunctorProperty {
    /// (G): image objects admit covering families into every target object.
    G,
    /// (F): fullness up to covers.
    F,
    /// (FF): faithfulness up to covers.
    FF,
    /// (LC): (G) + (F) + (FF) + source topology induced from the target.
    LC,
    Continuous,
    Cocontinuous,
}

/// Replayable failure data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// (G) fails: the sieve generated by image objects is not covering.
    TargetObject { object: usize, sieve: Sieve },
    /// (F) fails for this target-morphism vector between image objects.
    FullnessVector { source: usize, source_prime: usize, vector: Vec<Scalar>, sieve: Sieve },
    /// (FF) fails for this kernel vector.
    FaithfulnessVector { source: usize, source_prime: usize, vector: Vec<Scalar>, sieve: Sieve },
    /// A covering sieve on the source whose image-generated sieve is not
    /// covering, or vice versa.
    TopologyMismatch { object: usize, sieve: Sieve, covering_in_source: bool },
    /// A sheaf probe whose restriction is not a sheaf.
    Probe { index: usize },
    /// A basic target cover whose preimage sieve is not covering.
    PreimageNotCovering { object: usize, cover: Sieve },
}

/// Verdict plus counterexamples for one property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: FunctorProperty,
    pub verdict: bool,
    pub counterexamples: Vec<Counterexample>,
    /// Inventory notes: probe lists, bounds, conventions in effect.
    pub notes: Vec<String>,
}

impl PropertyReport {
    fn new(property: FunctorProperty, counterexamples: Vec<Counterexample>) -> PropertyReport {
        PropertyReport { property, verdict: counterexamples.is_empty(), counterexamples, notes: Vec::new() }
    }
}

/// How `phi^(-1)T` is read at the sieve level in the topology-compatibility
/// direction of the comparison check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageConvention {
    /// A source sieve is induced-covering when the sieve generated by its
    /// image is covering downstairs.
    ImageGenerated,
    /// A source sieve is induced-covering when it contains the pointwise
    /// preimage of some covering sieve downstairs.
    Pointwise,
}

/// The sieve of all morphisms into `c` factoring through image objects:
/// generated by every morphism from every `phi(A)` into `c`.
pub fn image_objects_sieve(m: &SiteMorphism, c: usize) -> Result<Sieve> {
    let phi = &m.functor;
    let tgt = phi.target();
    let field = tgt.field();
    let mut generators = Vec::new();
    for a in 0..phi.source().object_count() {
        let fa = phi.apply_object(a);
        let d = tgt.hom_dim(fa, c);
        for i in 0..d {
            let mut v = vec![field.zero(); d];
            v[i] = field.one();
            generators.push((fa, v));
        }
    }
    let generated = Sieve::from_generators(tgt, c, &generators)?;
    // Independent computation: spans of all composites through image
    // objects, assembled componentwise. Both must agree.
    let mut components = Vec::with_capacity(tgt.object_count());
    for b in 0..tgt.object_count() {
        let mut rows = Vec::new();
        for a in 0..phi.source().object_count() {
            let fa = phi.apply_object(a);
            let dg = tgt.hom_dim(fa, c);
            let dh = tgt.hom_dim(b, fa);
            for i in 0..dg {
                let mut g = vec![field.zero(); dg];
                g[i] = field.one();
                for j in 0..dh {
                    let mut h = vec![field.zero(); dh];
                    h[j] = field.one();
                    rows.push(tgt.compose(&g, &h, b, fa, c));
                }
            }
        }
        components.push(Subspace::from_rows(field, tgt.hom_dim(b, c), &rows));
    }
    let direct = Sieve::from_components(tgt, c, components);
    if direct != generated {
        return Err(Error::Precondition {
            what: "image-objects sieve computed two ways disagrees; composition tables broken"
                .into(),
        });
    }
    Ok(generated)
}

/// (G): for every target object, the sieve generated by all morphisms from
/// image objects must be covering.
pub fn check_g(m: &SiteMorphism, caps: &Caps) -> Result<PropertyReport> {
    let mut counterexamples = Vec::new();
    for c in 0..m.functor.target().object_count() {
        let sieve = image_objects_sieve(m, c)?;
        if !m.target_system.is_covering(&sieve, caps)?.covering {
            counterexamples.push(Counterexample::TargetObject { object: c, sieve });
        }
    }
    Ok(PropertyReport::new(FunctorProperty::G, counterexamples))
}

/// The fullness sieve of a target morphism vector `c : phi(A) -> phi(A')`:
/// all source morphisms `a` into `A` with `c . phi(a)` in the image of the
/// hom map into `A'`.
pub fn fullness_sieve(
    m: &SiteMorphism,
    a: usize,
    a_prime: usize,
    c: &[Scalar],
) -> Result<Sieve> {
    let phi = &m.functor;
    let src = phi.source();
    let tgt = phi.target();
    let (fa, fa2) = (phi.apply_object(a), phi.apply_object(a_prime));
    let mut components = Vec::with_capacity(src.object_count());
    for b in 0..src.object_count() {
        let fb = phi.apply_object(b);
        let post = tgt.postcompose_matrix(c, fb, fa, fa2);
        let map = post.mul(&phi.hom_map(b, a))?;
        components.push(Subspace::preimage(&map, &phi.hom_image(b, a_prime))?);
    }
    let out = Sieve::from_components(src, a, components);
    debug_assert!(out.is_closed());
    Ok(out)
}

/// (F): every fullness sieve is covering in the source system.
pub fn check_f(m: &SiteMorphism, caps: &Caps) -> Result<PropertyReport> {
    let phi = &m.functor;
    let src = phi.source();
    let tgt = phi.target();
    let mut counterexamples = Vec::new();
    for a in 0..src.object_count() {
        for a_prime in 0..src.object_count() {
            let (fa, fa2) = (phi.apply_object(a), phi.apply_object(a_prime));
            for c in tgt.enumerate_hom_vectors(fa, fa2, caps)? {
                let sieve = fullness_sieve(m, a, a_prime, &c)?;
                if !m.source_system.is_covering(&sieve, caps)?.covering {
                    counterexamples.push(Counterexample::FullnessVector {
                        source: a,
                        source_prime: a_prime,
                        vector: c,
                        sieve,
                    });
                }
            }
        }
    }
    Ok(PropertyReport::new(FunctorProperty::F, counterexamples))
}

/// The faithfulness sieve of a kernel vector `a : A -> A'`: all morphisms
/// `h` into `A` with `a . h = 0`.
pub fn faithfulness_sieve(m: &SiteMorphism, a: usize, a_prime: usize, v: &[Scalar]) -> Sieve {
    let src = m.functor.source();
    let mut components = Vec::with_capacity(src.object_count());
    for b in 0..src.object_count() {
        let post = src.postcompose_matrix(v, b, a, a_prime);
        components.push(Subspace::kernel(&post));
    }
    let out = Sieve::from_components(src, a, components);
    debug_assert!(out.is_closed());
    out
}

/// (FF): for every morphism killed by the functor, its kill-sieve is
/// covering in the source system.
pub fn check_ff(m: &SiteMorphism, caps: &Caps) -> Result<PropertyReport> {
    let phi = &m.functor;
    let src = phi.source();
    let mut counterexamples = Vec::new();
    for a in 0..src.object_count() {
        for a_prime in 0..src.object_count() {
            if src.hom_dim(a, a_prime) == 0 {
                continue;
            }
            let kernel = phi.hom_kernel(a, a_prime);
            for v in kernel.enumerate_vectors(caps)? {
                let sieve = faithfulness_sieve(m, a, a_prime, &v);
                if !m.source_system.is_covering(&sieve, caps)?.covering {
                    counterexamples.push(Counterexample::FaithfulnessVector {
                        source: a,
                        source_prime: a_prime,
                        vector: v,
                        sieve,
                    });
                }
            }
        }
    }
    Ok(PropertyReport::new(FunctorProperty::FF, counterexamples))
}

/// Cocontinuity: covers of image objects pull back to covers. Basic covers
/// suffice because the preimage sieve is monotone and covering classes are
/// up-closed on the fixtures' modes.
pub fn check_cocontinuous(m: &SiteMorphism, caps: &Caps) -> Result<PropertyReport> {
    let phi = &m.functor;
    let mut counterexamples = Vec::new();
    for a in 0..phi.source().object_count() {
        let fa = phi.apply_object(a);
        for cover in m.target_system.basic_covers(fa) {
            let back = Sieve::functor_preimage(phi, cover, a)?;
            if !m.source_system.is_covering(&back, caps)?.covering {
                counterexamples
                    .push(Counterexample::PreimageNotCovering { object: a, cover: cover.clone() });
            }
        }
    }
    Ok(PropertyReport::new(FunctorProperty::Cocontinuous, counterexamples))
}

/// Continuity, relative to a probe set: restriction must preserve the sheaf
/// property on every probe that is a sheaf. When `enumerate_bound` is set,
/// additionally enumerates all target modules up to the per-object
/// dimension bound and tests every sheaf among them. The report records the
/// probe inventory and the bound.
pub fn check_continuous(
    m: &SiteMorphism,
    probes: &[PresheafModule],
    enumerate_bound: Option<usize>,
    caps: &Caps,
) -> Result<PropertyReport> {
    let phi = &m.functor;
    let source_tester = SheafTester::new(&m.source_system, caps)?;
    let target_tester = SheafTester::new(&m.target_system, caps)?;
    let mut counterexamples = Vec::new();
    let mut notes = vec![format!("probes: {}", probes.len())];
    let mut sheaf_probes = 0usize;
    let mut run = |index: usize,
                   f: &PresheafModule,
                   counterexamples: &mut Vec<Counterexample>|
     -> Result<bool> {
        if !target_tester.is_sheaf(f)? {
            return Ok(false);
        }
        let restricted = PresheafModule::restrict(phi, f)?;
        if !source_tester.is_sheaf(&restricted)? {
            counterexamples.push(Counterexample::Probe { index });
        }
        Ok(true)
    };
    for (i, f) in probes.iter().enumerate() {
        if run(i, f, &mut counterexamples)? {
            sheaf_probes += 1;
        }
    }
    if let Some(bound) = enumerate_bound {
        let all = PresheafModule::enumerate_all(phi.target(), bound, caps)?;
        notes.push(format!("enumerated target modules up to fiber dimension {bound}: {}", all.len()));
        for (i, f) in all.iter().enumerate() {
            if run(probes.len() + i, f, &mut counterexamples)? {
                sheaf_probes += 1;
            }
        }
    } else {
        notes.push("no exhaustive enumeration requested".to_string());
    }
    notes.push(format!("sheaf probes exercised: {sheaf_probes}"));
    let mut report = PropertyReport::new(FunctorProperty::Continuous, counterexamples);
    report.notes = notes;
    Ok(report)
}

/// The full comparison condition: (G) for the target system, (F) and (FF)
/// for the source system, and equality of the source topology with the one
/// induced through the functor, checked exhaustively over all source
/// sieves. Mismatches report their direction separately.
pub fn check_lc(
    m: &SiteMorphism,
    convention: PreimageConvention,
    caps: &Caps,
) -> Result<PropertyReport> {
    let mut counterexamples = Vec::new();
    let g = check_g(m, caps)?;
    let f = check_f(m, caps)?;
    let ff = check_ff(m, caps)?;
    counterexamples.extend(g.counterexamples);
    counterexamples.extend(f.counterexamples);
    counterexamples.extend(ff.counterexamples);
    let phi = &m.functor;
    let src = phi.source();
    for a in 0..src.object_count() {
        for sieve in Sieve::enumerate(src, a, caps)? {
            let in_source = m.source_system.is_covering(&sieve, caps)?.covering;
            let induced = match convention {
                PreimageConvention::ImageGenerated => {
                    let image = sieve.image(phi)?;
                    m.target_system.is_covering(&image, caps)?.covering
                }
                PreimageConvention::Pointwise => {
                    let fa = phi.apply_object(a);
                    let mut found = false;
                    for cover in m.target_system.covering_sieves(fa, caps)? {
                        let back = Sieve::functor_preimage(phi, &cover, a)?;
                        if sieve.contains_sieve(&back) {
                            found = true;
                            break;
                        }
                    }
                    found
                }
            };
            if in_source != induced {
                counterexamples.push(Counterexample::TopologyMismatch {
                    object: a,
                    sieve,
                    covering_in_source: in_source,
                });
            }
        }
    }
    let mut report = PropertyReport::new(FunctorProperty::LC, counterexamples);
    report.notes.push(format!("preimage convention: {convention:?}"));
    Ok(report)
}

/// Builds the tensor product of two site morphisms: the tensor functor
/// between the tensor product sites.
pub fn tensor_site_morphism(m1: &SiteMorphism, m2: &SiteMorphism) -> Result<SiteMorphism> {
    let (src_t, tgt_t, functor) = LinearFunctor::tensor(&m1.functor, &m2.functor)?;
    let source_system =
        CoverSystem::tensor_topology(&src_t, &m1.source_system, &m2.source_system)?;
    let target_system =
        CoverSystem::tensor_topology(&tgt_t, &m1.target_system, &m2.target_system)?;
    SiteMorphism::new(functor, source_system, target_system)
}

/// Checks a property on both factors, then on their tensor product. The
/// factor failures are preconditions; a failure on the tensor side is the
/// interesting verdict and comes back in the report.
pub fn verify_tensor_preservation(
    m1: &SiteMorphism,
    m2: &SiteMorphism,
    property: FunctorProperty,
    caps: &Caps,
) -> Result<PropertyReport> {
    let run = |m: &SiteMorphism| -> Result<PropertyReport> {
        match property {
            FunctorProperty::G => check_g(m, caps),
            FunctorProperty::F => check_f(m, caps),
            FunctorProperty::FF => check_ff(m, caps),
            FunctorProperty::LC => check_lc(m, PreimageConvention::ImageGenerated, caps),
            FunctorProperty::Cocontinuous => check_cocontinuous(m, caps),
            FunctorProperty::Continuous => check_continuous(m, &[], Some(1), caps),
        }
    };
    for (name, m) in [("left", m1), ("right", m2)] {
        let r = run(m)?;
        if !r.verdict {
            return Err(Error::Precondition {
                what: format!("{name} factor does not satisfy {property:?}"),
            });
        }
    }
    let product = tensor_site_morphism(m1, m2)?;
    let mut report = run(&product)?;
    report
        .notes
        .push("tensor preservation check; a false verdict here is high severity".to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;
    use crate::topology::ClosureMode;

    fn f2() -> Field {
        Field::default()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    /// The inclusion of the source object into the arrow site, with the
    /// induced (trivial) topology upstairs.
    fn source_inclusion_morphism() -> SiteMorphism {
        let (sub, incl) = fixtures::source_inclusion(f2());
        let site = fixtures::arrow_site(f2());
        let source_system = CoverSystem::trivial(&sub);
        SiteMorphism::new(incl, source_system, site.system().clone()).unwrap()
    }

    #[test]
    fn identity_satisfies_everything() {
        let site = fixtures::arrow_site(f2());
        let id = SiteMorphism::identity(site.system());
        assert!(check_g(&id, &caps()).unwrap().verdict);
        assert!(check_f(&id, &caps()).unwrap().verdict);
        assert!(check_ff(&id, &caps()).unwrap().verdict);
        assert!(check_cocontinuous(&id, &caps()).unwrap().verdict);
        assert!(check_continuous(&id, &[], Some(1), &caps()).unwrap().verdict);
        let lc = check_lc(&id, PreimageConvention::ImageGenerated, &caps()).unwrap();
        assert!(lc.verdict);
    }

    #[test]
    fn source_inclusion_satisfies_lc() {
        let m = source_inclusion_morphism();
        assert!(check_g(&m, &caps()).unwrap().verdict);
        assert!(check_f(&m, &caps()).unwrap().verdict);
        assert!(check_ff(&m, &caps()).unwrap().verdict);
        let lc = check_lc(&m, PreimageConvention::ImageGenerated, &caps()).unwrap();
        assert!(lc.verdict);
        // The pointwise preimage convention agrees on this fixture.
        let lc2 = check_lc(&m, PreimageConvention::Pointwise, &caps()).unwrap();
        assert!(lc2.verdict);
    }

    #[test]
    fn tip_inclusion_fails_g_at_source_object() {
        // No morphisms from the tip reach the source object, so the
        // image-objects sieve at it is zero.
        let (sub, incl) = fixtures::tip_inclusion(f2());
        let site = fixtures::arrow_site(f2());
        let m = SiteMorphism::new(incl, CoverSystem::trivial(&sub), site.system().clone())
            .unwrap();
        let g = check_g(&m, &caps()).unwrap();
        assert!(!g.verdict);
        assert!(g
            .counterexamples
            .iter()
            .any(|c| matches!(c, Counterexample::TargetObject { object: 0, .. })));
    }

    #[test]
    fn arrow_quotient_fails_ff_for_trivial_source_topology() {
        let phi = fixtures::arrow_quotient_functor(f2());
        let src_sys = CoverSystem::trivial(phi.source());
        let tgt_sys = CoverSystem::trivial(phi.target());
        let m = SiteMorphism::new(phi, src_sys, tgt_sys).unwrap();
        let ff = check_ff(&m, &caps()).unwrap();
        assert!(!ff.verdict);
        // The arrow is killed but its kill-sieve is the zero sieve.
        assert!(ff.counterexamples.iter().any(|c| matches!(
            c,
            Counterexample::FaithfulnessVector { source: 0, source_prime: 1, .. }
        )));
        // Fullness survives: the quotient functor is surjective on homs.
        assert!(check_f(&m, &caps()).unwrap().verdict);
    }

    #[test]
    fn tip_inclusion_with_poor_source_system_is_not_cocontinuous() {
        // Source carries only the full cover; the arrow cover of the tip
        // pulls back to the zero sieve on the singleton source.
        let (sub, incl) = fixtures::tip_inclusion(f2());
        let site = fixtures::arrow_site(f2());
        let m = SiteMorphism::new(incl, CoverSystem::trivial(&sub), site.system().clone())
            .unwrap();
        let r = check_cocontinuous(&m, &caps()).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn lc_implies_cocontinuous_on_fixtures() {
        let site = fixtures::arrow_site(f2());
        let candidates = vec![SiteMorphism::identity(site.system()), source_inclusion_morphism()];
        for m in &candidates {
            if check_lc(m, PreimageConvention::ImageGenerated, &caps()).unwrap().verdict {
                assert!(check_cocontinuous(m, &caps()).unwrap().verdict);
            }
        }
    }

    #[test]
    fn common_cover_for_finite_morphism_lists() {
        // When (F) holds, the fullness sieves of finitely many target
        // vectors intersect to a covering sieve: constructive form of the
        // induction behind the comparison machinery.
        let m = source_inclusion_morphism();
        assert!(check_f(&m, &caps()).unwrap().verdict);
        let phi = m.functor();
        let tgt = phi.target();
        let mut cs = Vec::new();
        for c in tgt.enumerate_hom_vectors(0, 0, &caps()).unwrap() {
            cs.push(c);
        }
        let mut common = Sieve::representable(phi.source(), 0).unwrap();
        for c in &cs {
            common = common.intersect(&fullness_sieve(&m, 0, 0, c).unwrap()).unwrap();
        }
        assert!(m.source_system().is_covering(&common, &caps()).unwrap().covering);
    }

    #[test]
    fn continuity_detects_broken_restriction() {
        // The tip inclusion with a discrete source system: every target
        // sheaf restricts to a module over the singleton category, but the
        // discrete system only admits the zero sheaf.
        let (sub, incl) = fixtures::tip_inclusion(f2());
        let site = fixtures::arrow_site(f2());
        let m = SiteMorphism::new(incl, CoverSystem::discrete(&sub), site.system().clone())
            .unwrap();
        let rep = PresheafModule::representable(site.category(), 1);
        let r = check_continuous(&m, &[rep], None, &caps()).unwrap();
        assert!(!r.verdict);
        assert!(matches!(r.counterexamples[0], Counterexample::Probe { index: 0 }));
    }

    #[test]
    fn tensor_preservation_of_g_f_ff_cocontinuity() {
        let m = source_inclusion_morphism();
        for property in [
            FunctorProperty::G,
            FunctorProperty::F,
            FunctorProperty::FF,
            FunctorProperty::Cocontinuous,
        ] {
            let report = verify_tensor_preservation(&m, &m, property, &caps()).unwrap();
            assert!(report.verdict, "{property:?} not preserved");
        }
    }

    #[test]
    fn tensor_preservation_precondition_is_enforced() {
        let site = fixtures::arrow_site(f2());
        let (sub, incl) = fixtures::tip_inclusion(f2());
        let bad = SiteMorphism::new(incl, CoverSystem::trivial(&sub), site.system().clone())
            .unwrap();
        let err = verify_tensor_preservation(&bad, &bad, FunctorProperty::G, &caps());
        assert!(err.is_err());
    }

    #[test]
    fn raw_mode_system_reports_are_deterministic() {
        let site = fixtures::arrow_site(f2());
        let raw = site.system().with_mode(ClosureMode::Raw);
        let id = SiteMorphism::new(
            LinearFunctor::identity(site.category()),
            raw.clone(),
            raw,
        )
        .unwrap();
        let r1 = check_g(&id, &caps()).unwrap();
        let r2 = check_g(&id, &caps()).unwrap();
        assert_eq!(r1, r2);
    }
}
