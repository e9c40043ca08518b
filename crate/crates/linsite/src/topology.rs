//! Cover systems with closure semantics, axiom checking, and the
//! tensor-product topology.
//!
//! A cover system is intensional: finitely many basic covers per object plus
//! a closure mode. `raw` means the basic covers and nothing else; `up`
//! declares covering everything containing a basic cover; `upglue` is the
//! least class containing the up-closure and closed under the glueing rule
//! (if `R` is covering and `f^(-1)S` is covering for every `f in R`, then
//! `S` is covering). Full covering-sieve sets are only materialized by the
//! explicit enumeration entry points.
//!
//! Glue derivations quantify over all vectors of the relevant components,
//! so `upglue` decisions require a prime field.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cat::{CatRef, TensorCategory};
use crate::linalg::{Caps, Scalar};
use crate::sieve::Sieve;
use crate::{Error, Result};

/// How the basic covers generate the covering class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosureMode {
    Raw,
    Up,
    UpGlue,
}

/// Basic covers per object plus a closure mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSystem {
    category: CatRef,
    basic_covers: Vec<Vec<Sieve>>,
    mode: ClosureMode,
}

/// One step of a replayable `upglue` derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub sieve: Sieve,
    pub rule: DerivationRule,
}

/// The rule by which a step's sieve was admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationRule {
    /// Contains the indexed basic cover on its target.
    Up { basic: usize },
    /// Glued along the indexed basic cover: all pullbacks along its vectors
    /// appear earlier in the derivation.
    Glue { basic: usize },
}

/// An ordered derivation: every step depends only on earlier steps, and the
/// queried sieve is the final one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

/// The answer of a covering test, with a derivation when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringVerdict {
    pub covering: bool,
    pub witness: Option<Derivation>,
}

/// A failed identity/pullback/glueing instance found by the axiom checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The representable sieve on this object is not covering.
    Identity { object: usize },
    /// A covering sieve with a pullback that is not covering.
    Pullback { object: usize, cover: Sieve, from: usize, vector: Vec<Scalar> },
    /// A sieve all of whose pullbacks along a cover are covering, yet which
    /// is not covering itself.
    Glue { object: usize, cover: Sieve, candidate: Sieve },
}

/// Exhaustive axiom report over the enumerated sieve universe.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub identity: Vec<AxiomViolation>,
    pub pullback: Vec<AxiomViolation>,
    pub glue: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_localizing(&self) -> bool {
        self.identity.is_empty() && self.pullback.is_empty()
    }

    pub fn is_topology(&self) -> bool {
        self.is_localizing() && self.glue.is_empty()
    }
}

impl CoverSystem {
    /// Assembles a system, checking that every basic cover targets its
    /// indexing object. Whether the axioms hold is a separate question
    /// answered by [`CoverSystem::check_axioms`].
    pub fn new(category: &CatRef, basic_covers: Vec<Vec<Sieve>>, mode: ClosureMode) -> Result<CoverSystem> {
        if basic_covers.len() != category.object_count() {
            return Err(Error::Precondition {
                what: "cover system: one basic-cover list per object required".into(),
            });
        }
        for (a, list) in basic_covers.iter().enumerate() {
            for s in list {
                if s.target() != a {
                    return Err(Error::TargetMismatch { context: "cover system basic cover" });
                }
            }
        }
        Ok(CoverSystem { category: category.clone(), basic_covers, mode })
    }

    /// The trivial topology: only sieves containing the full representable
    /// (i.e. the representables themselves) are covering.
    pub fn trivial(category: &CatRef) -> CoverSystem {
        let basic_covers = (0..category.object_count())
            .map(|a| vec![Sieve::representable(category, a).expect("object index")])
            .collect();
        CoverSystem { category: category.clone(), basic_covers, mode: ClosureMode::Up }
    }

    /// The discrete topology: every sieve is covering (everything contains
    /// the zero sieve).
    pub fn discrete(category: &CatRef) -> CoverSystem {
        let basic_covers =
            (0..category.object_count()).map(|a| vec![Sieve::zero(category, a)]).collect();
        CoverSystem { category: category.clone(), basic_covers, mode: ClosureMode::Up }
    }

    /// The system whose basic covers are the sieves generated by single
    /// deflations, in `up` mode: a sieve is covering when it contains a
    /// deflation. Null presheaves for this system are exactly the modules
    /// in which every element dies along some deflation.
    pub fn single_deflation(
        category: &CatRef,
        deflations: &[(usize, usize, Vec<Scalar>)],
    ) -> Result<CoverSystem> {
        let mut basic_covers: Vec<Vec<Sieve>> = vec![Vec::new(); category.object_count()];
        for (src, tgt, v) in deflations {
            let sieve = Sieve::from_generators(category, *tgt, &[(*src, v.clone())])?;
            basic_covers[*tgt].push(sieve);
        }
        CoverSystem::new(category, basic_covers, ClosureMode::Up)
    }

    pub fn category(&self) -> &CatRef {
        &self.category
    }

    pub fn mode(&self) -> ClosureMode {
        self.mode
    }

    pub fn basic_covers(&self, a: usize) -> &[Sieve] {
        &self.basic_covers[a]
    }

    pub fn all_basic_covers(&self) -> &[Vec<Sieve>] {
        &self.basic_covers
    }

    /// A copy of the system under a different closure mode.
    pub fn with_mode(&self, mode: ClosureMode) -> CoverSystem {
        CoverSystem { category: self.category.clone(), basic_covers: self.basic_covers.clone(), mode }
    }

    fn up_witness(&self, s: &Sieve) -> Option<usize> {
        self.basic_covers[s.target()].iter().position(|b| s.contains_sieve(b))
    }

    /// Decides whether `s` is covering, with a replayable derivation in the
    /// glue modes.
    pub fn is_covering(&self, s: &Sieve, caps: &Caps) -> Result<CoveringVerdict> {
        match self.mode {
            ClosureMode::Raw => {
                let covering = self.basic_covers[s.target()].iter().any(|b| b == s);
                Ok(CoveringVerdict { covering, witness: None })
            }
            ClosureMode::Up => match self.up_witness(s) {
                Some(basic) => Ok(CoveringVerdict {
                    covering: true,
                    witness: Some(Derivation {
                        steps: vec![DerivationStep {
                            sieve: s.clone(),
                            rule: DerivationRule::Up { basic },
                        }],
                    }),
                }),
                None => Ok(CoveringVerdict { covering: false, witness: None }),
            },
            ClosureMode::UpGlue => self.upglue_decide(s, caps),
        }
    }

    /// Glue-derivation search. Complete for the least-fixed-point
    /// semantics: glueing along basic covers only loses nothing, because a
    /// glue step along a derived cover can be replayed through the basic
    /// cover that derived it.
    fn upglue_decide(&self, root: &Sieve, caps: &Caps) -> Result<CoveringVerdict> {
        if !self.category.field().is_prime_field() {
            return Err(Error::UnsupportedField { op: "upglue covering decision" });
        }
        // Reachable AND-OR graph: a node is proven if it up-contains a
        // basic cover, or some basic cover on its target has all pullback
        // children proven.
        struct Node {
            groups: Vec<(usize, Vec<Sieve>)>,
            proven: Option<DerivationRule>,
        }
        let mut nodes: BTreeMap<Sieve, Node> = BTreeMap::new();
        let mut order: Vec<Sieve> = Vec::new();
        let mut queue: VecDeque<Sieve> = VecDeque::new();
        let mut visited_pullbacks: u64 = 0;
        queue.push_back(root.clone());
        while let Some(s) = queue.pop_front() {
            if nodes.contains_key(&s) {
                continue;
            }
            if let Some(basic) = self.up_witness(&s) {
                order.push(s.clone());
                nodes.insert(s, Node { groups: Vec::new(), proven: Some(DerivationRule::Up { basic }) });
                continue;
            }
            let mut groups = Vec::new();
            for (bi, cover) in self.basic_covers[s.target()].iter().enumerate() {
                let mut kids = BTreeSet::new();
                for b in 0..self.category.object_count() {
                    for f in cover.component(b).enumerate_vectors(caps)? {
                        visited_pullbacks += 1;
                        if visited_pullbacks > caps.max_enumeration {
                            return Err(Error::CapExceeded {
                                what: "glue-derivation pullbacks",
                                cap: caps.max_enumeration,
                                requested: visited_pullbacks,
                            });
                        }
                        kids.insert(s.pullback(&f, b)?);
                    }
                }
                groups.push((bi, kids.into_iter().collect::<Vec<_>>()));
            }
            for (_, kids) in &groups {
                for kid in kids {
                    if !nodes.contains_key(kid) {
                        queue.push_back(kid.clone());
                    }
                }
            }
            nodes.insert(s, Node { groups, proven: None });
        }
        // Least fixed point over the finite graph.
        loop {
            let mut newly: Vec<(Sieve, DerivationRule)> = Vec::new();
            for (s, node) in &nodes {
                if node.proven.is_some() {
                    continue;
                }
                for (bi, kids) in &node.groups {
                    if kids.iter().all(|k| nodes.get(k).is_some_and(|n| n.proven.is_some())) {
                        newly.push((s.clone(), DerivationRule::Glue { basic: *bi }));
                        break;
                    }
                }
            }
            if newly.is_empty() {
                break;
            }
            for (s, rule) in newly {
                order.push(s.clone());
                nodes.get_mut(&s).expect("known node").proven = Some(rule);
            }
        }
        let covering = nodes[root].proven.is_some();
        let witness = covering.then(|| Derivation {
            steps: order
                .iter()
                .map(|s| DerivationStep {
                    sieve: s.clone(),
                    rule: nodes[s].proven.expect("ordered nodes are proven"),
                })
                .collect(),
        });
        Ok(CoveringVerdict { covering, witness })
    }

    /// Re-checks a recorded derivation step by step against this system.
    pub fn replay(&self, root: &Sieve, derivation: &Derivation, caps: &Caps) -> Result<bool> {
        let mut proven: BTreeSet<&Sieve> = BTreeSet::new();
        for step in &derivation.steps {
            let basics = &self.basic_covers[step.sieve.target()];
            let ok = match step.rule {
                DerivationRule::Up { basic } => basics
                    .get(basic)
                    .is_some_and(|b| step.sieve.contains_sieve(b)),
                DerivationRule::Glue { basic } => {
                    let Some(cover) = basics.get(basic) else {
                        return Ok(false);
                    };
                    let mut all = true;
                    'outer: for b in 0..self.category.object_count() {
                        for f in cover.component(b).enumerate_vectors(caps)? {
                            let kid = step.sieve.pullback(&f, b)?;
                            if !proven.contains(&kid) {
                                all = false;
                                break 'outer;
                            }
                        }
                    }
                    all
                }
            };
            if !ok {
                return Ok(false);
            }
            proven.insert(&step.sieve);
        }
        Ok(proven.contains(root))
    }

    /// All sieves on every object of the category.
    pub fn sieve_universe(&self, caps: &Caps) -> Result<Vec<Vec<Sieve>>> {
        (0..self.category.object_count())
            .map(|a| Sieve::enumerate(&self.category, a, caps))
            .collect()
    }

    /// The covering sieves on `a`, materialized by enumeration.
    pub fn covering_sieves(&self, a: usize, caps: &Caps) -> Result<Vec<Sieve>> {
        Ok(self.covering_table(caps)?.swap_remove(a))
    }

    /// The covering sieves of every object, materialized by enumeration.
    /// In `upglue` mode this runs the joint least fixed point over the
    /// whole universe, since glue steps couple objects.
    pub fn covering_table(&self, caps: &Caps) -> Result<Vec<Vec<Sieve>>> {
        let universe = self.sieve_universe(caps)?;
        match self.mode {
            ClosureMode::Raw | ClosureMode::Up => universe
                .iter()
                .map(|list| {
                    list.iter()
                        .filter_map(|s| match self.is_covering(s, caps) {
                            Ok(v) if v.covering => Some(Ok(s.clone())),
                            Ok(_) => None,
                            Err(e) => Some(Err(e)),
                        })
                        .collect()
                })
                .collect(),
            ClosureMode::UpGlue => {
                let mut proven: BTreeSet<Sieve> = BTreeSet::new();
                for list in &universe {
                    for s in list {
                        if self.up_witness(s).is_some() {
                            proven.insert(s.clone());
                        }
                    }
                }
                loop {
                    let mut changed = false;
                    for list in &universe {
                        for s in list {
                            if proven.contains(s) {
                                continue;
                            }
                            'covers: for cover in &self.basic_covers[s.target()] {
                                for b in 0..self.category.object_count() {
                                    for f in cover.component(b).enumerate_vectors(caps)? {
                                        if !proven.contains(&s.pullback(&f, b)?) {
                                            continue 'covers;
                                        }
                                    }
                                }
                                proven.insert(s.clone());
                                changed = true;
                                break;
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                Ok(universe
                    .into_iter()
                    .map(|list| list.into_iter().filter(|s| proven.contains(s)).collect())
                    .collect())
            }
        }
    }

    /// Exhaustively checks the identity and pullback axioms, and the
    /// glueing axiom when `include_glue` is set.
    pub fn check_axioms(&self, include_glue: bool, caps: &Caps) -> Result<AxiomReport> {
        let universe = self.sieve_universe(caps)?;
        let table = self.covering_table(caps)?;
        let covering: Vec<BTreeSet<&Sieve>> =
            table.iter().map(|list| list.iter().collect()).collect();
        let mut report = AxiomReport::default();
        let n = self.category.object_count();
        for a in 0..n {
            let rep = Sieve::representable(&self.category, a)?;
            if !covering[a].contains(&rep) {
                report.identity.push(AxiomViolation::Identity { object: a });
            }
        }
        for a in 0..n {
            for cover in &table[a] {
                for from in 0..n {
                    for f in self.category.enumerate_hom_vectors(from, a, caps)? {
                        let pulled = cover.pullback(&f, from)?;
                        if !covering[from].contains(&pulled) {
                            report.pullback.push(AxiomViolation::Pullback {
                                object: a,
                                cover: cover.clone(),
                                from,
                                vector: f.clone(),
                            });
                        }
                    }
                }
            }
        }
        if include_glue {
            for a in 0..n {
                for cover in &table[a] {
                    'candidates: for s in &universe[a] {
                        if covering[a].contains(s) {
                            continue;
                        }
                        for b in 0..n {
                            for f in cover.component(b).enumerate_vectors(caps)? {
                                if !covering[b].contains(&s.pullback(&f, b)?) {
                                    continue 'candidates;
                                }
                            }
                        }
                        report.glue.push(AxiomViolation::Glue {
                            object: a,
                            cover: cover.clone(),
                            candidate: s.clone(),
                        });
                    }
                }
            }
        }
        Ok(report)
    }

    /// Identity and pullback axioms only.
    pub fn check_localizing(&self, caps: &Caps) -> Result<AxiomReport> {
        self.check_axioms(false, caps)
    }

    /// All three axioms.
    pub fn check_topology(&self, caps: &Caps) -> Result<AxiomReport> {
        self.check_axioms(true, caps)
    }

    /// The intersection of all covering sieves on `a`. For a topology this
    /// is itself covering, which is asserted; expect an error on systems
    /// that are not topologies.
    ///
    /// In `raw` and `up` modes the intersection of the basic covers equals
    /// the intersection of all covering sieves, so no enumeration is
    /// needed.
    pub fn minimal_cover(&self, a: usize, caps: &Caps) -> Result<Sieve> {
        let list: Vec<Sieve> = match self.mode {
            ClosureMode::Raw | ClosureMode::Up => self.basic_covers[a].clone(),
            ClosureMode::UpGlue => self.covering_sieves(a, caps)?,
        };
        let mut min = Sieve::representable(&self.category, a)?;
        for s in &list {
            min = min.intersect(s)?;
        }
        let verdict = self.is_covering(&min, caps)?;
        if !verdict.covering {
            return Err(Error::Precondition {
                what: format!(
                    "minimal cover on object {} is not covering; the system is not a topology",
                    self.category.object_name(a)
                ),
            });
        }
        Ok(min)
    }

    /// Lattice supremum: union of the basic covers, closed under `upglue`.
    pub fn sup(systems: &[&CoverSystem]) -> Result<CoverSystem> {
        let Some(first) = systems.first() else {
            return Err(Error::Precondition { what: "sup of an empty family".into() });
        };
        let category = first.category.clone();
        let mut basic_covers: Vec<Vec<Sieve>> = vec![Vec::new(); category.object_count()];
        for sys in systems {
            if sys.category.as_ref() != category.as_ref() {
                return Err(Error::Precondition { what: "sup: different categories".into() });
            }
            for (a, list) in sys.basic_covers.iter().enumerate() {
                for s in list {
                    if !basic_covers[a].contains(s) {
                        basic_covers[a].push(s.clone());
                    }
                }
            }
        }
        for list in &mut basic_covers {
            list.sort();
        }
        CoverSystem::new(&category, basic_covers, ClosureMode::UpGlue)
    }

    /// Lattice infimum: the covering class is the intersection of the
    /// covering classes, materialized by enumeration into a `raw` system.
    pub fn inf(systems: &[&CoverSystem], caps: &Caps) -> Result<CoverSystem> {
        let Some(first) = systems.first() else {
            return Err(Error::Precondition { what: "inf of an empty family".into() });
        };
        let category = first.category.clone();
        let mut tables = Vec::new();
        for sys in systems {
            if sys.category.as_ref() != category.as_ref() {
                return Err(Error::Precondition { what: "inf: different categories".into() });
            }
            tables.push(sys.covering_table(caps)?);
        }
        let mut basic_covers = Vec::with_capacity(category.object_count());
        for a in 0..category.object_count() {
            let mut common: Vec<Sieve> = tables[0][a].clone();
            for table in &tables[1..] {
                let keep: BTreeSet<&Sieve> = table[a].iter().collect();
                common.retain(|s| keep.contains(s));
            }
            basic_covers.push(common);
        }
        CoverSystem::new(&category, basic_covers, ClosureMode::Raw)
    }

    /// The one-sided system induced on the product by the left factor
    /// (`side = 0`) or the right factor (`side = 1`): basic covers are the
    /// factor's basic covers tensored with full representables, up-closed.
    /// These systems are topologies whenever the factor is.
    pub fn one_sided(
        tensor: &TensorCategory,
        factor: &CoverSystem,
        side: usize,
    ) -> Result<CoverSystem> {
        let expected = if side == 0 { tensor.left() } else { tensor.right() };
        if factor.category.as_ref() != expected.as_ref() {
            return Err(Error::Precondition {
                what: "one-sided system: factor does not match the tensor category".into(),
            });
        }
        let prod = tensor.product();
        let mut basic_covers: Vec<Vec<Sieve>> = vec![Vec::new(); prod.object_count()];
        for o in 0..prod.object_count() {
            let (a, b) = tensor.split_object(o);
            if side == 0 {
                let full = Sieve::representable(tensor.right(), b)?;
                for r in &factor.basic_covers[a] {
                    basic_covers[o].push(Sieve::tensor(r, &full, tensor)?);
                }
            } else {
                let full = Sieve::representable(tensor.left(), a)?;
                for s in &factor.basic_covers[b] {
                    basic_covers[o].push(Sieve::tensor(&full, s, tensor)?);
                }
            }
        }
        CoverSystem::new(prod, basic_covers, ClosureMode::Up)
    }

    /// The tensor product topology: the smallest topology containing both
    /// one-sided systems. Basic covers are the one-sided tensors of the
    /// factors' basic covers, closed under `upglue`.
    pub fn tensor_topology(
        tensor: &TensorCategory,
        left: &CoverSystem,
        right: &CoverSystem,
    ) -> Result<CoverSystem> {
        if left.category.field() != right.category.field() {
            return Err(Error::FieldMismatch { context: "tensor topology" });
        }
        let t1 = CoverSystem::one_sided(tensor, left, 0)?;
        let t2 = CoverSystem::one_sided(tensor, right, 1)?;
        CoverSystem::sup(&[&t1, &t2])
    }

    /// Compares covering classes extensionally.
    pub fn same_covering_sieves(&self, other: &CoverSystem, caps: &Caps) -> Result<bool> {
        Ok(self.covering_table(caps)? == other.covering_table(caps)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    fn f2() -> Field {
        Field::default()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn arrow_site_is_a_topology() {
        let site = fixtures::arrow_site(f2());
        let report = site.system().check_topology(&caps()).unwrap();
        assert!(report.is_topology());
    }

    #[test]
    fn arrow_site_covering_sieves_at_tip() {
        let site = fixtures::arrow_site(f2());
        let covers = site.system().covering_sieves(1, &caps()).unwrap();
        // The arrow sieve and the representable; not the zero sieve.
        assert_eq!(covers.len(), 2);
        let zero = Sieve::zero(site.category(), 1);
        assert!(!covers.contains(&zero));
        let verdict = site.system().is_covering(&zero, &caps()).unwrap();
        assert!(!verdict.covering);
    }

    #[test]
    fn up_mode_accepts_supersets_of_basic_covers() {
        let site = fixtures::arrow_site(f2());
        let rep = Sieve::representable(site.category(), 1).unwrap();
        let verdict = site.system().is_covering(&rep, &caps()).unwrap();
        assert!(verdict.covering);
        assert!(site
            .system()
            .replay(&rep, verdict.witness.as_ref().unwrap(), &caps())
            .unwrap());
    }

    #[test]
    fn empty_basic_covers_fail_identity_axiom() {
        let c = fixtures::arrow_category(f2());
        let sys = CoverSystem::new(&c, vec![vec![], vec![]], ClosureMode::Up).unwrap();
        let report = sys.check_localizing(&caps()).unwrap();
        assert_eq!(report.identity.len(), 2);
        assert!(!report.is_localizing());
    }

    #[test]
    fn raw_singleton_fails_pullback() {
        // Only the arrow sieve at the tip, raw: no cover at the source
        // object, so pullback (and identity) fail.
        let c = fixtures::arrow_category(f2());
        let arrow = Sieve::from_generators(&c, 1, &[(0, vec![f2().one()])]).unwrap();
        let sys = CoverSystem::new(&c, vec![vec![], vec![arrow]], ClosureMode::Raw).unwrap();
        let report = sys.check_localizing(&caps()).unwrap();
        assert!(!report.pullback.is_empty());
    }

    #[test]
    fn trivial_and_discrete_are_topologies() {
        let c = fixtures::arrow_category(f2());
        for sys in [CoverSystem::trivial(&c), CoverSystem::discrete(&c)] {
            assert!(sys.check_topology(&caps()).unwrap().is_topology());
        }
        // Discrete: every sieve is covering.
        let table = CoverSystem::discrete(&c).covering_table(&caps()).unwrap();
        let universe = CoverSystem::discrete(&c).sieve_universe(&caps()).unwrap();
        assert_eq!(table, universe);
    }

    #[test]
    fn minimal_cover_on_arrow_site() {
        let site = fixtures::arrow_site(f2());
        let min1 = site.system().minimal_cover(0, &caps()).unwrap();
        assert!(min1.is_full());
        let min2 = site.system().minimal_cover(1, &caps()).unwrap();
        assert_eq!(min2, fixtures::arrow_sieve(site.category()));
        // Discrete topology: minimal cover is the zero sieve.
        let c = fixtures::arrow_category(f2());
        assert!(CoverSystem::discrete(&c).minimal_cover(1, &caps()).unwrap().is_zero());
        // Trivial topology: the representable.
        assert!(CoverSystem::trivial(&c).minimal_cover(1, &caps()).unwrap().is_full());
    }

    #[test]
    fn minimal_cover_is_contained_in_every_cover() {
        let site = fixtures::arrow_site(f2());
        for a in 0..2 {
            let min = site.system().minimal_cover(a, &caps()).unwrap();
            for s in site.system().covering_sieves(a, &caps()).unwrap() {
                assert!(s.contains_sieve(&min));
            }
        }
    }

    #[test]
    fn covering_closure_grows_with_mode() {
        let site = fixtures::arrow_site(f2());
        let raw = site.system().with_mode(ClosureMode::Raw);
        let up = site.system().with_mode(ClosureMode::Up);
        let glue = site.system().with_mode(ClosureMode::UpGlue);
        let (tr, tu, tg) = (
            raw.covering_table(&caps()).unwrap(),
            up.covering_table(&caps()).unwrap(),
            glue.covering_table(&caps()).unwrap(),
        );
        for a in 0..2 {
            let sr: BTreeSet<_> = tr[a].iter().collect();
            let su: BTreeSet<_> = tu[a].iter().collect();
            let sg: BTreeSet<_> = tg[a].iter().collect();
            assert!(sr.is_subset(&su));
            assert!(su.is_subset(&sg));
        }
        // Re-closing a topology changes nothing: here up already equals
        // upglue.
        assert_eq!(tu, tg);
    }

    #[test]
    fn covering_sieves_intersect_to_covering_sieves() {
        let site = fixtures::arrow_site(f2());
        for a in 0..2 {
            let covers = site.system().covering_sieves(a, &caps()).unwrap();
            for r in &covers {
                for s in &covers {
                    let both = r.intersect(s).unwrap();
                    assert!(site.system().is_covering(&both, &caps()).unwrap().covering);
                }
            }
        }
    }

    #[test]
    fn sup_is_idempotent_and_inf_with_trivial_is_trivial() {
        let site = fixtures::arrow_site(f2());
        let sys = site.system();
        let doubled = CoverSystem::sup(&[sys, sys]).unwrap();
        assert!(doubled.same_covering_sieves(sys, &caps()).unwrap());
        let trivial = CoverSystem::trivial(site.category());
        let inf = CoverSystem::inf(&[&trivial, sys], &caps()).unwrap();
        assert!(inf.same_covering_sieves(&trivial, &caps()).unwrap());
        let sup = CoverSystem::sup(&[&trivial, sys]).unwrap();
        assert!(sup.same_covering_sieves(sys, &caps()).unwrap());
    }

    #[test]
    fn single_deflation_recovers_arrow_site() {
        let c = fixtures::arrow_category(f2());
        // The arrow plus both identities as deflations.
        let sys = CoverSystem::single_deflation(
            &c,
            &[
                (0, 1, vec![f2().one()]),
                (0, 0, vec![f2().one()]),
                (1, 1, vec![f2().one()]),
            ],
        )
        .unwrap();
        let site = fixtures::arrow_site(f2());
        assert!(sys.same_covering_sieves(site.system(), &caps()).unwrap());
        // A split epimorphism alone generates the trivial topology on the
        // point category.
        let pt = crate::cat::FiniteLinearCategory::one_object(f2(), "pt");
        let split = CoverSystem::single_deflation(&pt, &[(0, 0, vec![f2().one()])]).unwrap();
        assert!(split.same_covering_sieves(&CoverSystem::trivial(&pt), &caps()).unwrap());
    }

    #[test]
    fn tensor_of_trivial_topologies_is_trivial() {
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        let trivial = CoverSystem::trivial(&c);
        let tt = CoverSystem::tensor_topology(&t, &trivial, &trivial).unwrap();
        let expected = CoverSystem::trivial(t.product());
        assert!(tt.same_covering_sieves(&expected, &caps()).unwrap());
    }

    #[test]
    fn tensor_sieve_of_covers_is_covering_with_glue_witness() {
        // R ⊠ S is covering in the tensor topology for covering R, S; the
        // derivation needs a genuine glue step.
        let site = fixtures::arrow_site(f2());
        let c = site.category();
        let t = TensorCategory::new(c, c).unwrap();
        let tt = CoverSystem::tensor_topology(&t, site.system(), site.system()).unwrap();
        let arrow = fixtures::arrow_sieve(c);
        let rs = Sieve::tensor(&arrow, &arrow, &t).unwrap();
        let verdict = tt.is_covering(&rs, &caps()).unwrap();
        assert!(verdict.covering);
        let witness = verdict.witness.unwrap();
        assert!(witness
            .steps
            .iter()
            .any(|s| matches!(s.rule, DerivationRule::Glue { .. })));
        assert!(tt.replay(&rs, &witness, &caps()).unwrap());
        // Tampering with the final step must break the replay.
        let mut broken = witness.clone();
        broken.steps.pop();
        assert!(!tt.replay(&rs, &broken, &caps()).unwrap());
    }

    #[test]
    fn axiom_report_glue_catches_up_only_closure() {
        // The one-sided tensor system in plain `up` mode satisfies identity
        // and pullback but the tensor sieve of two covers shows it is
        // glue-incomplete only when neither factor is trivial; here the
        // system stays a topology, matching the paper-side statement that
        // one-sided systems are topologies.
        let site = fixtures::arrow_site(f2());
        let c = site.category();
        let t = TensorCategory::new(c, c).unwrap();
        let t1 = CoverSystem::one_sided(&t, site.system(), 0).unwrap();
        let report = t1.check_topology(&caps()).unwrap();
        assert!(report.is_topology());
    }
}
