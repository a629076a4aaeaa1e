use std::sync::OnceLock;

use proptest::prelude::*;

use fusionkit::biset;
use fusionkit::catalog;
use fusionkit::group::is_power_of;
use fusionkit::lattice;
use fusionkit::{AbelianSection, Coset, ElemId, FiniteGroup, FusionSystem};

const NAMES: &[&str] = &["sym4", "alt4", "sl2_3", "sl3_2", "alt5", "dihedral8", "quaternion8"];

struct Fixture {
    f: FusionSystem,
    section: AbelianSection,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        NAMES
            .iter()
            .map(|name| {
                let f = FusionSystem::new(catalog::build(name).unwrap(), 2).unwrap();
                let g = f.group();
                let section = AbelianSection::new(g, f.sylow(), &g.commutator_subgroup(f.sylow())).unwrap();
                Fixture { f, section }
            })
            .collect()
    })
}

fn pick(g: &FiniteGroup, i: usize) -> ElemId {
    ElemId((i % g.order()) as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classical_transfer_is_a_homomorphism(k in 0..NAMES.len(), a in any::<usize>(), b in any::<usize>()) {
        let fx = &fixtures()[k];
        let g = fx.f.group();
        let (u, v) = (pick(g, a), pick(g, b));
        let tu = biset::classical_transfer(g, &fx.section, u).unwrap();
        let tv = biset::classical_transfer(g, &fx.section, v).unwrap();
        let tuv = biset::classical_transfer(g, &fx.section, g.mul(u, v)).unwrap();
        prop_assert_eq!(tuv, fx.section.mul(tu, tv));
    }

    #[test]
    fn transfer_ignores_the_transversal(k in 0..NAMES.len(), a in any::<usize>()) {
        let fx = &fixtures()[k];
        let g = fx.f.group();
        let u = pick(g, a);
        let other = g.left_transversal_max(&g.whole(), fx.f.sylow());
        prop_assert_eq!(
            biset::classical_transfer(g, &fx.section, u).unwrap(),
            biset::classical_transfer_with(g, &fx.section, &other, u).unwrap()
        );
    }

    #[test]
    fn transfer_is_constant_on_fusion(k in 0..NAMES.len(), a in any::<usize>(), b in any::<usize>()) {
        let fx = &fixtures()[k];
        let g = fx.f.group();
        let s = fx.f.sylow();
        let u = s.elements()[a % s.order()];
        let x = pick(g, b);
        let ux = g.conj(u, x);
        if s.contains(ux) {
            prop_assert_eq!(
                biset::classical_transfer(g, &fx.section, u).unwrap(),
                biset::classical_transfer(g, &fx.section, ux).unwrap()
            );
        }
    }

    #[test]
    fn subgroup_orders_divide_the_group(k in 0..NAMES.len(), a in any::<usize>(), b in any::<usize>()) {
        let g = fixtures()[k].f.group();
        let h = g.closure(&[pick(g, a), pick(g, b)]);
        prop_assert_eq!(g.order() % h.order(), 0);
        // cosets partition G
        prop_assert_eq!(g.left_transversal(&g.whole(), &h).len() * h.order(), g.order());
    }

    #[test]
    fn products_of_parts_commute(k in 0..NAMES.len(), a in any::<usize>()) {
        let fx = &fixtures()[k];
        let s = fx.f.sylow();
        let u = s.elements()[a % s.order()];
        let g = fx.f.group();
        let omega = biset::characteristic_biset(&fx.f);
        let mut forward: Vec<Coset> = omega
            .parts()
            .iter()
            .map(|p| biset::subgroup_transfer(g, &fx.section, &p.map, u).unwrap())
            .collect();
        let there = fx.section.product(forward.iter().copied());
        forward.reverse();
        prop_assert_eq!(there, fx.section.product(forward));
    }

    #[test]
    fn independence_matches_span_order(bits in any::<u16>()) {
        // Ω₁ of Q8/Z(Q8) ≅ C2 × C2 and of the dihedral group of order 16 mod its center
        for name in ["quaternion8", "dihedral16", "dihedral8"] {
            let g = catalog::build(name).unwrap();
            let s = g.whole();
            let z = g.commutator_subgroup(&s);
            let a = AbelianSection::new(&g, &s, &z).unwrap();
            let omega = a.omega_1(2).unwrap();
            let chosen: Vec<Coset> = omega
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, c)| c != Coset::TRIVIAL && bits & (1 << (i % 16)) != 0)
                .map(|(_, c)| c)
                .collect();
            let independent = a.linearly_independent(&chosen, 2).unwrap();
            let span = a.span(&chosen).len();
            prop_assert_eq!(independent, span == 1 << chosen.len());
        }
    }
}

#[test]
fn p_residual_matches_normal_subgroup_oracle() {
    for name in ["sym4", "alt4", "sl2_3", "sym3", "dihedral8", "alt5", "cyclic6"] {
        let g = catalog::build(name).unwrap();
        for p in [2u64, 3] {
            let whole = g.whole();
            let mut oracle = whole.clone();
            for n in lattice::normal_subgroups(&g, &whole).unwrap() {
                if is_power_of((g.order() / n.order()) as u64, p) {
                    oracle = g.intersection(&oracle, &n);
                }
            }
            assert_eq!(g.p_residual(&whole, p), oracle, "{name} at {p}");
        }
    }
}

#[test]
fn construction_is_deterministic() {
    for name in NAMES {
        let a = catalog::build(name).unwrap();
        let b = catalog::build(name).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.sylow_subgroup(2), b.sylow_subgroup(2));
        let fa = FusionSystem::new(a, 2).unwrap();
        let fb = FusionSystem::new(b, 2).unwrap();
        assert_eq!(fa.essential_subgroups().unwrap(), fb.essential_subgroups().unwrap());
    }
}

#[test]
fn biset_size_is_sum_over_parts() {
    for fx in fixtures() {
        let omega = biset::characteristic_biset(&fx.f);
        assert_eq!(omega.size(), fx.f.group().order());
        let s = fx.f.sylow().order();
        let total: usize = omega.parts().iter().map(|p| p.multiplicity * s * s / p.domain().order()).sum();
        assert_eq!(total, omega.size());
    }
}

#[test]
fn copies_pass_exactly_when_prime_to_p() {
    // multiplicity m passes (c) iff p does not divide m·|G:S|
    for (name, p) in [("sym4", 2u64), ("sym4", 3), ("alt5", 5)] {
        let f = FusionSystem::new(catalog::build(name).unwrap(), p).unwrap();
        let omega = biset::characteristic_biset(&f);
        let index = f.group().order() / f.sylow().order();
        for m in 1..=4usize {
            let r = biset::verify_characteristic(&f, &omega.disjoint_copies(m)).unwrap();
            assert_eq!(r.passed(), (m * index) as u64 % p != 0, "{name} p={p} m={m}");
        }
    }
}
