//! Named fixture groups.
//!
//! Accepted names: `symN`, `altN`, `cyclicN`, `dihedralN` (order `N`),
//! `quaternion8`, `sl2_3`, `sl3_2`, and direct products written either
//! `AxB` or `direct_product(A,B)`. Parenthesised forms such as `sym(4)`
//! are accepted too.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

/// Fixtures exercised by the test and acceptance suites.
pub const STANDARD_FIXTURES: &[&str] =
    &["sym3", "sym4", "alt4", "alt5", "dihedral8", "quaternion8", "sl2_3", "sl3_2", "alt6", "sym4xsym4"];

pub fn build(name: &str) -> Result<FiniteGroup> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if let Some(inner) = compact.strip_prefix("direct_product(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = split_top_level_comma(inner).ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
        return direct_product(&build(a)?, &build(b)?);
    }
    if let Some((a, b)) = compact.split_once('x') {
        return direct_product(&build(a)?, &build(b)?);
    }
    let unknown = || Error::UnknownFixture(name.to_string());
    let atom = compact.replace(['(', ')'], "");
    let numbered = |prefix: &str| -> Option<usize> { atom.strip_prefix(prefix).and_then(|n| n.parse().ok()) };
    match atom.as_str() {
        "quaternion8" | "q8" => return quaternion8(),
        "sl2_3" | "sl23" => return sl2_3(),
        "sl3_2" | "sl32" | "psl2_7" => return sl3_2(),
        _ => {}
    }
    if let Some(n) = numbered("sym") {
        return symmetric(n);
    }
    if let Some(n) = numbered("alt") {
        return alternating(n);
    }
    if let Some(n) = numbered("cyclic") {
        return cyclic(n);
    }
    if let Some(n) = numbered("dihedral") {
        return dihedral(n);
    }
    Err(unknown())
}

fn split_top_level_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn cycle(degree: usize, points: &[u32]) -> Permutation {
    Permutation::from_cycles(degree, &[points]).expect("fixture cycle is valid")
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownFixture("sym0".into()));
    }
    let mut gens = Vec::new();
    if n > 1 {
        gens.push(cycle(n, &[0, 1]));
        gens.push(cycle(n, &(0..n as u32).collect::<Vec<_>>()));
    }
    FiniteGroup::from_generators(format!("sym{n}"), n, gens)
}

pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownFixture("alt0".into()));
    }
    // 3-cycles (0,1,k) generate Alt(n).
    let gens = (2..n as u32).map(|k| cycle(n, &[0, 1, k])).collect();
    FiniteGroup::from_generators(format!("alt{n}"), n, gens)
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownFixture("cyclic0".into()));
    }
    let gens = if n > 1 { vec![cycle(n, &(0..n as u32).collect::<Vec<_>>())] } else { vec![] };
    FiniteGroup::from_generators(format!("cyclic{n}"), n, gens)
}

/// Dihedral group of the given order, acting on `order / 2` points.
pub fn dihedral(order: usize) -> Result<FiniteGroup> {
    if order < 4 || order % 2 != 0 {
        return Err(Error::UnknownFixture(format!("dihedral{order}")));
    }
    let m = order / 2;
    let rotation = cycle(m, &(0..m as u32).collect::<Vec<_>>());
    let reflection = Permutation::from_images((0..m).map(|i| ((m - i) % m) as u32).collect())?;
    let g = FiniteGroup::from_generators(format!("dihedral{order}"), m, vec![rotation, reflection])?;
    if g.order() != order {
        // order 4 on two points collapses; use the Klein action on four points
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]])?;
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]])?;
        return FiniteGroup::from_generators(format!("dihedral{order}"), 4, vec![a, b]);
    }
    Ok(g)
}

/// Regular representation of Q8 on 8 points.
pub fn quaternion8() -> Result<FiniteGroup> {
    let i = Permutation::from_cycles(8, &[&[0, 1, 3, 6], &[2, 5, 7, 4]])?;
    let j = Permutation::from_cycles(8, &[&[0, 2, 3, 7], &[1, 4, 6, 5]])?;
    FiniteGroup::from_generators("quaternion8", 8, vec![i, j])
}

/// Permutation action of 2x2 or 3x3 matrices over `F_q` on the nonzero row
/// vectors, `v ↦ vM`. Vectors are indexed by their base-`q` digits minus one.
fn matrix_action(q: u32, dim: usize, matrices: &[Vec<Vec<u32>>]) -> Vec<Permutation> {
    let count = (q as usize).pow(dim as u32) - 1;
    let decode = |mut k: usize| -> Vec<u32> {
        k += 1;
        (0..dim)
            .map(|_| {
                let d = (k % q as usize) as u32;
                k /= q as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[u32]| -> u32 { (v.iter().rev().fold(0usize, |acc, &d| acc * q as usize + d as usize) - 1) as u32 };
    matrices
        .iter()
        .map(|m| {
            let images = (0..count)
                .map(|k| {
                    let v = decode(k);
                    let w: Vec<u32> = (0..dim).map(|c| (0..dim).map(|r| v[r] * m[r][c]).sum::<u32>() % q).collect();
                    encode(&w)
                })
                .collect();
            Permutation::from_images(images).expect("invertible matrix permutes nonzero vectors")
        })
        .collect()
}

/// Right regular representation: `x ↦ x·g` on the element list.
pub fn regular_representation(g: &FiniteGroup, name: &str) -> Result<FiniteGroup> {
    let n = g.order();
    let gens = g
        .generators()
        .iter()
        .map(|p| {
            let id = g.require(p)?;
            Permutation::from_images(g.ids().map(|x| g.mul(x, id).0).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteGroup::from_generators(name, n, gens)
}

/// SL(2,3) in its regular representation (degree 24).
pub fn sl2_3() -> Result<FiniteGroup> {
    let gens = matrix_action(3, 2, &[vec![vec![1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]]);
    let on_vectors = FiniteGroup::from_generators("sl2_3_on_vectors", 8, gens)?;
    regular_representation(&on_vectors, "sl2_3")
}

/// SL(3,2) ≅ PSL(2,7) on the 7 nonzero vectors of `F_2^3`.
pub fn sl3_2() -> Result<FiniteGroup> {
    let transvection = vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
    let rotation = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
    let gens = matrix_action(2, 3, &[transvection, rotation]);
    FiniteGroup::from_generators("sl3_2", 7, gens)
}

/// `A × B` acting on the disjoint union of the two point sets.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let degree = a.degree() + b.degree();
    let mut gens: Vec<Permutation> = a.generators().iter().map(|p| p.shifted(0, degree)).collect();
    gens.extend(b.generators().iter().map(|p| p.shifted(a.degree(), degree)));
    FiniteGroup::from_generators(format!("{}x{}", a.name(), b.name()), degree, gens)
}
