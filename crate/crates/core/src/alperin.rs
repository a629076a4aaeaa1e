//! Conjugation families and decompositions of fusion morphisms into
//! restrictions of automorphisms of family members, with the up/down
//! reordering by centralizer order.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Injection};
use crate::group::{ElemId, FiniteGroup, Subgroup};

/// Morphism searches give up after this many states.
pub const STATE_LIMIT: usize = 1_000_000;

/// A set of subgroups of `S` containing `S`, with the least witness of each
/// automorphism of each member.
#[derive(Clone, Debug)]
pub struct ConjugationFamily {
    members: Vec<Subgroup>,
    automorphisms: Vec<Vec<ElemId>>,
}

impl ConjugationFamily {
    /// Members are sorted and deduplicated; `S` is added if missing. The
    /// family is not certified here, see [`ConjugationFamily::certify`].
    pub fn new(f: &FusionSystem, mut members: Vec<Subgroup>) -> Result<Self> {
        if !members.contains(f.sylow()) {
            members.push(f.sylow().clone());
        }
        members.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        members.dedup();
        let mut automorphisms = Vec::with_capacity(members.len());
        for q in &members {
            if !q.is_subset(f.sylow()) {
                return Err(Error::Precondition("family member is not a subgroup of S".into()));
            }
            let mut w = f.aut_f(q)?.witnesses;
            w.sort_unstable();
            automorphisms.push(w);
        }
        Ok(ConjugationFamily { members, automorphisms })
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    /// Checks that every `φ ∈ Hom_F(P, S)`, for `P` running over the
    /// `S`-class representatives, is reachable. Returns the number of
    /// morphisms checked.
    pub fn certify(&self, f: &FusionSystem) -> Result<usize> {
        let g = f.group();
        let mut checked = 0;
        for p in f.subgroup_class_reps()? {
            let search = Search::run(f, self, &p, None, |_| true)?;
            for phi in f.hom_f(&p, f.sylow()) {
                checked += 1;
                if !search.index.contains_key(&search.key_of(&phi)) {
                    return Err(Error::FamilyNotGenerating(format!(
                        "map on {} with witness {}",
                        g.subgroup_label(&p),
                        phi.witness().map(|w| g.label(w)).unwrap_or_default()
                    )));
                }
            }
        }
        Ok(checked)
    }
}

/// Essential subgroups together with `S`, certified to generate.
pub fn essential_family(f: &FusionSystem) -> Result<ConjugationFamily> {
    let family = ConjugationFamily::new(f, f.essential_subgroups()?)?;
    family.certify(f)?;
    Ok(family)
}

/// Centric radical subgroups, optionally only the fully normalized ones.
pub fn centric_radical_family(f: &FusionSystem, fully_normalized_only: bool) -> Result<ConjugationFamily> {
    let mut members = Vec::new();
    for p in f.subgroups()? {
        if f.is_centric(p) && f.is_radical(p)? && (!fully_normalized_only || f.is_fully_normalized(p)) {
            members.push(p.clone());
        }
    }
    let family = ConjugationFamily::new(f, members)?;
    family.certify(f)?;
    Ok(family)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub q: Subgroup,
    /// Conjugation by this element restricts to the automorphism of `q`.
    pub alpha: ElemId,
}

/// `(Q_i, α_i)` with intermediates `P_0 = P, P_i = P_{i-1}^{α_i}` and
/// centralizer profile `|C_S(P_i)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub source: Subgroup,
    pub steps: Vec<Step>,
    pub intermediates: Vec<Subgroup>,
    pub profile: Vec<usize>,
}

impl Decomposition {
    pub fn from_steps(f: &FusionSystem, source: &Subgroup, steps: Vec<Step>) -> Self {
        let g = f.group();
        let mut intermediates = vec![source.clone()];
        for step in &steps {
            let last = intermediates.last().expect("nonempty");
            intermediates.push(g.conjugate_subgroup(last, step.alpha));
        }
        let profile = intermediates.iter().map(|p| f.centralizer_in_s(p).order()).collect();
        Decomposition { source: source.clone(), steps, intermediates, profile }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `α_1 ⋯ α_n` restricted to the source.
    pub fn composite(&self, g: &FiniteGroup) -> Injection {
        let w = self.steps.iter().fold(ElemId::IDENTITY, |acc, s| g.mul(acc, s.alpha));
        Injection::conjugation(g, &self.source, w)
    }

    /// `P_{i-1} ≤ Q_i ≤ S` and `α_i` normalizes `Q_i` at every step.
    pub fn is_valid(&self, f: &FusionSystem) -> bool {
        let g = f.group();
        self.steps.iter().enumerate().all(|(i, step)| {
            self.intermediates[i].is_subset(&step.q)
                && step.q.is_subset(f.sylow())
                && g.conjugate_subgroup(&step.q, step.alpha) == step.q
        })
    }

    /// Valid, and the composite agrees with `phi` elementwise.
    pub fn realizes(&self, f: &FusionSystem, phi: &Injection) -> bool {
        self.is_valid(f) && self.composite(f.group()).same_map(phi)
    }

    pub fn is_up(&self) -> bool {
        self.profile.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn to_json(&self, g: &FiniteGroup, peak: Option<usize>) -> DecompositionJson {
        DecompositionJson {
            source: g.subgroup_label(&self.source),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson { q: g.subgroup_label(&s.q), alpha_witness: g.label(s.alpha) })
                .collect(),
            profile: self.profile.clone(),
            peak,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepJson {
    #[serde(rename = "Q")]
    pub q: String,
    pub alpha_witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionJson {
    pub source: String,
    pub steps: Vec<StepJson>,
    pub profile: Vec<usize>,
    pub peak: Option<usize>,
}

/// Weakly rises to index `k`, then weakly falls.
pub fn is_unimodal_at(profile: &[usize], k: usize) -> bool {
    k < profile.len().max(1)
        && profile[..=k.min(profile.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1])
        && profile[k.min(profile.len().saturating_sub(1))..].windows(2).all(|w| w[0] >= w[1])
}

pub fn is_unimodal(profile: &[usize]) -> bool {
    profile.is_empty() || (0..profile.len()).any(|k| is_unimodal_at(profile, k))
}

/// Breadth-first search over the maps `P → S` reachable by restricted family
/// automorphisms. A state is the image of the greedy generating set of `P`.
struct Search {
    gens: Vec<ElemId>,
    keys: Vec<Vec<ElemId>>,
    parent: Vec<Option<(usize, usize, ElemId)>>,
    index: HashMap<Vec<ElemId>, usize>,
    found: Option<usize>,
}

impl Search {
    fn run(
        f: &FusionSystem,
        family: &ConjugationFamily,
        source: &Subgroup,
        target: Option<&Injection>,
        accept: impl Fn(&Subgroup) -> bool,
    ) -> Result<Search> {
        let g = f.group();
        let gens = g.generating_set(source);
        let mut search = Search { gens, keys: Vec::new(), parent: Vec::new(), index: HashMap::new(), found: None };
        let goal = target.map(|phi| search.key_of(phi));
        let start = search.gens.clone();
        search.index.insert(start.clone(), 0);
        search.keys.push(start);
        search.parent.push(None);
        if goal.as_ref() == Some(&search.keys[0]) {
            search.found = Some(0);
            return Ok(search);
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for (m, q) in family.members.iter().enumerate() {
                if !search.keys[node].iter().all(|&x| q.contains(x)) {
                    continue;
                }
                for &w in &family.automorphisms[m] {
                    let next: Vec<ElemId> = search.keys[node].iter().map(|&x| g.conj(x, w)).collect();
                    if search.index.contains_key(&next) {
                        continue;
                    }
                    if !accept(&g.closure(&next)) {
                        continue;
                    }
                    let id = search.keys.len();
                    if id >= STATE_LIMIT {
                        return Err(Error::SizeLimit { what: "morphism search".into(), limit: STATE_LIMIT });
                    }
                    search.index.insert(next.clone(), id);
                    search.keys.push(next);
                    search.parent.push(Some((node, m, w)));
                    if goal.as_ref() == Some(&search.keys[id]) {
                        search.found = Some(id);
                        return Ok(search);
                    }
                    queue.push_back(id);
                }
            }
        }
        Ok(search)
    }

    fn key_of(&self, phi: &Injection) -> Vec<ElemId> {
        self.gens.iter().map(|&x| phi.apply(x).expect("generator in domain")).collect()
    }

    fn path(&self, family: &ConjugationFamily, mut node: usize) -> Vec<Step> {
        let mut steps = Vec::new();
        while let Some((prev, m, w)) = self.parent[node] {
            steps.push(Step { q: family.members[m].clone(), alpha: w });
            node = prev;
        }
        steps.reverse();
        steps
    }
}

/// A shortest chain of restricted family automorphisms composing to `phi`.
pub fn decompose(f: &FusionSystem, family: &ConjugationFamily, phi: &Injection) -> Result<Decomposition> {
    decompose_through(f, family, phi, |_| true)
}

/// As [`decompose`], but every intermediate `P_i` (`i ≥ 1`) must satisfy `accept`.
pub fn decompose_through(
    f: &FusionSystem,
    family: &ConjugationFamily,
    phi: &Injection,
    accept: impl Fn(&Subgroup) -> bool,
) -> Result<Decomposition> {
    let g = f.group();
    let search = Search::run(f, family, phi.domain(), Some(phi), accept)?;
    match search.found {
        Some(node) => {
            let d = Decomposition::from_steps(f, phi.domain(), search.path(family, node));
            debug_assert!(d.realizes(f, phi));
            Ok(d)
        }
        None => Err(Error::FamilyNotGenerating(format!(
            "map on {} into {}",
            g.subgroup_label(phi.domain()),
            g.subgroup_label(&phi.image(g))
        ))),
    }
}

/// The least `x` with `c_x|_P = φ` and `(P·C_S(P))^x ≤ S`.
fn extension_witness(f: &FusionSystem, phi: &Injection) -> Option<ElemId> {
    let g = f.group();
    let p = phi.domain();
    let gens = g.generating_set(p);
    let cgens = g.generating_set(&f.centralizer_in_s(p));
    let targets: Vec<ElemId> = gens.iter().map(|&x| phi.apply(x).expect("in domain")).collect();
    g.ids().find(|&x| {
        gens.iter().zip(&targets).all(|(&y, &t)| g.conj(y, x) == t)
            && cgens.iter().all(|&c| f.sylow().contains(g.conj(c, x)))
    })
}

/// A decomposition of `phi` with nondecreasing centralizer profile; the image
/// of `phi` must be fully centralized.
pub fn up_decompose(f: &FusionSystem, family: &ConjugationFamily, phi: &Injection) -> Result<Decomposition> {
    let g = f.group();
    let p = phi.domain();
    let target = phi.image(g);
    if !f.is_fully_centralized(&target) {
        return Err(Error::Precondition("up decomposition needs a fully centralized target".into()));
    }
    if phi.is_identity() {
        return Ok(Decomposition::from_steps(f, p, vec![]));
    }
    let x = extension_witness(f, phi)
        .ok_or_else(|| Error::Internal("no extension of the morphism to P·C_S(P)".into()))?;
    let extended_domain = g.join(p, &f.centralizer_in_s(p));
    let extended = Injection::conjugation(g, &extended_domain, x);
    let full = decompose(f, family, &extended)?;
    let chain = Decomposition::from_steps(f, p, full.steps);
    let start = chain.profile[0];
    if start == f.centralizer_in_s(&target).order() {
        if !chain.is_up() {
            return Err(Error::Internal("equal centralizer orders but the chain is not flat".into()));
        }
        return Ok(chain);
    }
    let l = (1..chain.profile.len())
        .find(|&i| chain.profile[i - 1] < chain.profile[i])
        .ok_or_else(|| Error::Internal("centralizer order never grows".into()))?;
    if chain.profile[..l].iter().any(|&c| c != start) {
        return Err(Error::Internal("centralizer order dropped before the first increase".into()));
    }
    let head: Vec<Step> = chain.steps[..l].to_vec();
    let w = head.iter().fold(ElemId::IDENTITY, |acc, s| g.mul(acc, s.alpha));
    let rest = Injection::conjugation(g, &chain.intermediates[l], g.mul(g.inv(w), x));
    let tail = up_decompose(f, family, &rest)?;
    let mut steps = head;
    steps.extend(tail.steps);
    Ok(Decomposition::from_steps(f, p, steps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpDown {
    pub decomposition: Decomposition,
    /// Number of rising steps; the profile peaks at this index.
    pub peak: usize,
}

/// `ψ : P′ → P″` with `P″` the least fully centralized member of `P′^F`
/// and `ψ` the least map; the identity when `P′` is fully centralized.
pub fn centralizing_map(f: &FusionSystem, p: &Subgroup) -> Injection {
    if f.is_fully_centralized(p) {
        return Injection::identity(p);
    }
    let best = f
        .f_conjugates_subgroup(p)
        .into_iter()
        .filter(|q| f.is_fully_centralized(q))
        .min()
        .expect("some conjugate is fully centralized");
    f.hom_f(p, &best).into_iter().next().expect("conjugates are F-isomorphic")
}

/// Rises to a fully centralized conjugate of the target, then descends to it.
pub fn updown_decompose(f: &FusionSystem, family: &ConjugationFamily, phi: &Injection) -> Result<UpDown> {
    let g = f.group();
    let psi = centralizing_map(f, &phi.image(g));
    let up = up_decompose(f, family, &phi.then(g, &psi)?)?;
    let back = up_decompose(f, family, &psi)?;
    let peak = up.len();
    let mut steps = up.steps;
    steps.extend(back.steps.into_iter().rev().map(|s| Step { q: s.q, alpha: g.inv(s.alpha) }));
    Ok(UpDown { decomposition: Decomposition::from_steps(f, phi.domain(), steps), peak })
}

pub const INDEX_NOTE: &str =
    "the step subgroups are read as h1 normalizing VS2 and h2 normalizing VS1, so c_h = c_h1 c_h2 factors through VS2 then VS1";

/// Normalizer version of the up/down statement in `Sym(4) × Sym(4)` at `p = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizerReport {
    pub essential_orders: Vec<usize>,
    pub essentials_are_vs1_vs2: bool,
    pub v_order: usize,
    pub h1: String,
    pub h2: String,
    pub p: String,
    #[serde(skip)]
    pub p_subgroup: Subgroup,
    pub class_size: usize,
    /// `|N_S(R)|` for `R ∈ P^F − {P}`, in subgroup order.
    pub other_normalizer_orders: Vec<usize>,
    pub others_normalizer_is_v: bool,
    pub normalizer_index: usize,
    /// `|N_S(P^{h1})|, |N_S(P^{h1²})|`.
    pub h1_orbit_normalizer_orders: Vec<usize>,
    pub p_fully_normalized: bool,
    pub p_h1_fully_normalized: bool,
    /// `(VS2, c_h1), (VS1, c_h2)` is valid and composes to `c_h` on `P`.
    pub stated_chain_realizes: bool,
    pub shortest_chain: DecompositionJson,
    /// Some essential chain for `c_h` has only fully normalized intermediates.
    pub normalized_chain_exists: bool,
    pub index_note: String,
}

pub fn normalizer_counterexample(f: &FusionSystem) -> Result<NormalizerReport> {
    let g = f.group();
    let s = f.sylow();
    if g.order() != 576 || g.degree() != 8 || f.prime() != 2 {
        return Err(Error::Precondition("expects Sym(4) x Sym(4) on 4 + 4 points at p = 2".into()));
    }
    let fixing = |range: std::ops::Range<u32>| -> Result<Subgroup> {
        let els: Vec<ElemId> = g.ids().filter(|&x| range.clone().all(|i| g.perm(x).apply(i) == i)).collect();
        g.subgroup_from_elements(els)
    };
    let h1_group = fixing(4..8)?;
    let h2_group = fixing(0..4)?;
    let s1 = g.intersection(s, &h1_group);
    let s2 = g.intersection(s, &h2_group);
    let mut v = s.clone();
    for x in g.ids() {
        v = g.intersection(&v, &g.conjugate_subgroup(s, x));
    }
    let vs1 = g.join(&v, &s1);
    let vs2 = g.join(&v, &s2);

    let essentials = f.essential_subgroups()?;
    let family = ConjugationFamily::new(f, essentials.clone())?;
    let mut expected = vec![vs1.clone(), vs2.clone()];
    expected.sort();
    let essentials_are_vs1_vs2 = essentials == expected;

    let fours: Vec<Subgroup> = crate::lattice::subgroups_between(g, &g.trivial(), &v)?
        .into_iter()
        .filter(|q| q.order() == 4 && q.elements().iter().all(|&x| g.element_order(x) <= 2))
        .collect();
    let order3 = |h: &Subgroup, normalizes: &Subgroup| -> Vec<ElemId> {
        h.elements()
            .iter()
            .copied()
            .filter(|&x| g.element_order(x) == 3 && g.conjugate_subgroup(normalizes, x) == *normalizes)
            .collect()
    };
    let mut choice = None;
    'search: for &h1 in &order3(&h1_group, &vs2) {
        for &h2 in &order3(&h2_group, &vs1) {
            let h = g.mul(h1, h2);
            for p in &fours {
                if g.conjugate_subgroup(p, h) == *p && f.normalizer_in_s(p).order() * 2 == s.order() {
                    choice = Some((h1, h2, p.clone()));
                    break 'search;
                }
            }
        }
    }
    let (h1, h2, p) = choice.ok_or_else(|| Error::Internal("no four subgroup normalized by h1 h2".into()))?;
    let h = g.mul(h1, h2);

    let class = f.f_conjugates_subgroup(&p);
    let others: Vec<&Subgroup> = class.iter().filter(|r| **r != p).collect();
    let other_normalizer_orders: Vec<usize> = others.iter().map(|r| f.normalizer_in_s(r).order()).collect();
    let others_normalizer_is_v = others.iter().all(|r| f.normalizer_in_s(r) == v);
    let p_h1 = g.conjugate_subgroup(&p, h1);
    let p_h1h1 = g.conjugate_subgroup(&p_h1, h1);

    let c_h = Injection::conjugation(g, &p, h);
    let stated = Decomposition::from_steps(
        f,
        &p,
        vec![Step { q: vs2.clone(), alpha: h1 }, Step { q: vs1.clone(), alpha: h2 }],
    );
    let stated_chain_realizes = stated.realizes(f, &c_h) && family.members().contains(&vs1) && family.members().contains(&vs2);
    let shortest = decompose(f, &family, &c_h)?;
    let normalized_chain_exists = match decompose_through(f, &family, &c_h, |q| f.is_fully_normalized(q)) {
        Ok(_) => true,
        Err(Error::FamilyNotGenerating(_)) => false,
        Err(e) => return Err(e),
    };

    Ok(NormalizerReport {
        essential_orders: essentials.iter().map(|e| e.order()).collect(),
        essentials_are_vs1_vs2,
        v_order: v.order(),
        h1: g.label(h1),
        h2: g.label(h2),
        p: g.subgroup_label(&p),
        p_subgroup: p.clone(),
        class_size: class.len(),
        other_normalizer_orders,
        others_normalizer_is_v,
        normalizer_index: s.order() / f.normalizer_in_s(&p).order(),
        h1_orbit_normalizer_orders: vec![f.normalizer_in_s(&p_h1).order(), f.normalizer_in_s(&p_h1h1).order()],
        p_fully_normalized: f.is_fully_normalized(&p),
        p_h1_fully_normalized: f.is_fully_normalized(&p_h1),
        stated_chain_realizes,
        shortest_chain: shortest.to_json(g, None),
        normalized_chain_exists,
        index_note: INDEX_NOTE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn system(name: &str, p: u64) -> FusionSystem {
        FusionSystem::new(catalog::build(name).unwrap(), p).unwrap()
    }

    #[test]
    fn unimodality() {
        assert!(is_unimodal(&[]));
        assert!(is_unimodal(&[1, 2, 2, 4, 3, 3, 1]));
        assert!(is_unimodal(&[4, 2, 1]));
        assert!(!is_unimodal(&[2, 1, 2]));
        assert!(is_unimodal_at(&[1, 4, 2], 1));
        assert!(!is_unimodal_at(&[1, 4, 2], 0));
    }

    #[test]
    fn families_of_small_systems() {
        let f = system("dihedral8", 2);
        let fam = essential_family(&f).unwrap();
        assert_eq!(fam.members(), std::slice::from_ref(f.sylow()));
        let f = system("sym4", 2);
        let fam = essential_family(&f).unwrap();
        assert_eq!(fam.members().iter().map(|q| q.order()).collect::<Vec<_>>(), vec![4, 8]);
        assert!(centric_radical_family(&f, true).unwrap().certify(&f).unwrap() > 0);
    }

    #[test]
    fn lone_sylow_does_not_generate_sym4() {
        let f = system("sym4", 2);
        let fam = ConjugationFamily::new(&f, vec![]).unwrap();
        assert!(matches!(fam.certify(&f), Err(Error::FamilyNotGenerating(_))));
    }

    #[test]
    fn trivial_and_inner_decompositions() {
        let f = system("sym4", 2);
        let g = f.group();
        let fam = essential_family(&f).unwrap();
        let s = f.sylow();
        let d = decompose(&f, &fam, &Injection::identity(s)).unwrap();
        assert!(d.is_empty());
        let x = s.elements().iter().copied().find(|&x| !g.center(s).contains(x)).unwrap();
        let phi = Injection::conjugation(g, s, x);
        let d = decompose(&f, &fam, &phi).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(&d.steps[0].q, s);
    }

    #[test]
    fn every_morphism_decomposes_up_and_down() {
        for name in ["sym4", "sl2_3", "alt4", "sym3"] {
            let f = system(name, 2);
            let g = f.group();
            let fam = essential_family(&f).unwrap();
            for p in f.subgroup_class_reps().unwrap() {
                for phi in f.hom_f(&p, f.sylow()) {
                    let ud = updown_decompose(&f, &fam, &phi).unwrap();
                    assert!(ud.decomposition.realizes(&f, &phi), "{name}");
                    assert!(is_unimodal_at(&ud.decomposition.profile, ud.peak), "{name}");
                    if f.is_fully_centralized(&phi.image(g)) {
                        assert!(up_decompose(&f, &fam, &phi).unwrap().is_up());
                    }
                }
            }
        }
    }

    #[test]
    fn up_decompose_needs_centralized_target() {
        let f = system("sym4", 2);
        let fam = essential_family(&f).unwrap();
        let t = f.subgroups().unwrap().iter().find(|q| q.order() == 2 && !f.is_fully_centralized(q)).unwrap().clone();
        assert!(up_decompose(&f, &fam, &Injection::identity(&t)).is_err());
    }
}
