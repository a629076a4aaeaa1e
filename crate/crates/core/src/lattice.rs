//! Subgroup enumeration for small groups.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup, Subgroup};

/// Subgroup enumeration is refused above this order.
pub const LATTICE_LIMIT: usize = 1024;

/// Every subgroup `H` with `base ≤ H ≤ top`, sorted by order and then
/// lexicographically. Built by closing `{base}` under joins with the cyclic
/// subgroups of `top`. Refused when `|top : base|` exceeds [`LATTICE_LIMIT`].
pub fn subgroups_between(g: &FiniteGroup, base: &Subgroup, top: &Subgroup) -> Result<Vec<Subgroup>> {
    subgroups_between_with_limit(g, base, top, LATTICE_LIMIT)
}

pub fn subgroups_between_with_limit(
    g: &FiniteGroup,
    base: &Subgroup,
    top: &Subgroup,
    limit: usize,
) -> Result<Vec<Subgroup>> {
    let index = top.order() / base.order().max(1);
    if index > limit {
        return Err(Error::SizeLimit { what: format!("subgroup lattice of index {index}"), limit });
    }
    if !base.is_subset(top) {
        return Err(Error::Precondition("lattice base is not contained in top".into()));
    }
    let cyclic = cyclic_generators(g, top);
    let mut found: HashSet<Subgroup> = HashSet::from([base.clone()]);
    let mut work = vec![base.clone()];
    while let Some(h) = work.pop() {
        let mut tried = HashSet::new();
        for &x in &cyclic {
            if h.contains(x) {
                continue;
            }
            let j = g.join_elements(&h, &[x]);
            if !tried.insert(j.elements().to_vec()) {
                continue;
            }
            if !found.contains(&j) {
                found.insert(j.clone());
                work.push(j);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    Ok(out)
}

pub fn all_subgroups(g: &FiniteGroup, top: &Subgroup) -> Result<Vec<Subgroup>> {
    subgroups_between(g, &g.trivial(), top)
}

/// One generator (the least) per cyclic subgroup of `top`.
fn cyclic_generators(g: &FiniteGroup, top: &Subgroup) -> Vec<ElemId> {
    let mut seen: BTreeSet<Vec<ElemId>> = BTreeSet::new();
    let mut out = Vec::new();
    for &x in top.elements() {
        if x == ElemId::IDENTITY {
            continue;
        }
        let c = g.closure(&[x]);
        if seen.insert(c.elements().to_vec()) {
            out.push(x);
        }
    }
    out
}

/// Normal subgroups of `top`, as joins of normal closures of elements.
pub fn normal_subgroups(g: &FiniteGroup, top: &Subgroup) -> Result<Vec<Subgroup>> {
    if top.order() > LATTICE_LIMIT {
        return Err(Error::SizeLimit { what: format!("normal subgroups of a group of order {}", top.order()), limit: LATTICE_LIMIT });
    }
    let mut closures: Vec<Subgroup> = Vec::new();
    for &x in top.elements() {
        let class: Vec<ElemId> = top.elements().iter().map(|&y| g.conj(x, y)).collect();
        let n = g.closure(&class);
        if !closures.contains(&n) {
            closures.push(n);
        }
    }
    let mut found: HashSet<Subgroup> = closures.iter().cloned().collect();
    let mut work: Vec<Subgroup> = closures.clone();
    while let Some(h) = work.pop() {
        for c in &closures {
            if c.is_subset(&h) {
                continue;
            }
            let j = g.join(&h, c);
            if found.insert(j.clone()) {
                work.push(j);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Partitions `subgroups` into classes under conjugation by `within`.
/// Each class is listed in input order; classes are ordered by their first member.
pub fn conjugacy_classes(g: &FiniteGroup, subgroups: &[Subgroup], within: &Subgroup) -> Vec<Vec<usize>> {
    let gens = g.generating_set(within);
    let index: std::collections::HashMap<&Subgroup, usize> = subgroups.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = vec![i];
        class_of[i] = c;
        let mut head = 0;
        while head < members.len() {
            let h = &subgroups[members[head]];
            head += 1;
            for &x in &gens {
                let k = g.conjugate_subgroup(h, x);
                if let Some(&j) = index.get(&k) {
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                    }
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn subgroup_counts() {
        // known counts: S3 has 6 subgroups, S4 has 30, Q8 has 6, D8 has 10
        let cases = [("sym3", 6), ("sym4", 30), ("quaternion8", 6), ("dihedral8", 10), ("alt4", 10)];
        for (name, count) in cases {
            let g = catalog::build(name).unwrap();
            assert_eq!(all_subgroups(&g, &g.whole()).unwrap().len(), count, "{name}");
        }
    }

    #[test]
    fn lattice_guard() {
        let g = catalog::build("sym7").unwrap();
        assert!(all_subgroups(&g, &g.whole()).unwrap_err().is_size_limit());
    }

    #[test]
    fn overgroups() {
        let g = catalog::build("sym4").unwrap();
        let s = g.sylow_subgroup(2);
        let over = subgroups_between(&g, &s, &g.whole()).unwrap();
        assert_eq!(over.len(), 2);
    }

    #[test]
    fn normal_subgroup_counts() {
        // S4: 1, V4, A4, S4
        let g = catalog::build("sym4").unwrap();
        let ns = normal_subgroups(&g, &g.whole()).unwrap();
        assert_eq!(ns.iter().map(|h| h.order()).collect::<Vec<_>>(), vec![1, 4, 12, 24]);
        let a6 = catalog::build("alt6").unwrap();
        assert_eq!(normal_subgroups(&a6, &a6.whole()).unwrap().len(), 2);
    }

    #[test]
    fn classes_of_sym4_subgroups() {
        // S4 has 11 conjugacy classes of subgroups
        let g = catalog::build("sym4").unwrap();
        let subs = all_subgroups(&g, &g.whole()).unwrap();
        assert_eq!(conjugacy_classes(&g, &subs, &g.whole()).len(), 11);
    }
}
