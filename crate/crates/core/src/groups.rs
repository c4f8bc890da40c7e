//! Small finite groups used as inputs and test corpus.

use crate::coxeter::GroupTable;
use crate::table::Magma;

fn from_fn(order: usize, generators: Vec<usize>, mul: impl Fn(usize, usize) -> usize) -> GroupTable {
    let rows: Vec<Vec<usize>> = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
    GroupTable::from_rows(&rows, Some(generators)).expect("constructed table is a group")
}

/// `Z_n` with generator `1`.
pub fn cyclic(n: usize) -> GroupTable {
    let gens = if n > 1 { vec![1] } else { vec![] };
    from_fn(n, gens, |a, b| (a + b) % n)
}

/// Dihedral group of order `2n`: `r^k` is `k`, `r^k s` is `n + k`.
pub fn dihedral(n: usize) -> GroupTable {
    let gens = if n > 1 { vec![1, n] } else { vec![n] };
    from_fn(2 * n, gens, |a, b| {
        let (ka, fa) = (a % n, a >= n);
        let (kb, fb) = (b % n, b >= n);
        let k = if fa { (ka + n - kb) % n } else { (ka + kb) % n };
        k + if fa != fb { n } else { 0 }
    })
}

/// Dicyclic group of order `4n`: `a^k x^e` is `k + 2n·e`, with
/// `a^{2n} = 1`, `x² = a^n`, `x a x⁻¹ = a⁻¹`. `dicyclic(2)` is `Q8`.
pub fn dicyclic(n: usize) -> GroupTable {
    let m = 2 * n;
    from_fn(4 * n, vec![1, m], |a, b| {
        let (ka, ea) = (a % m, a / m);
        let (kb, eb) = (b % m, b / m);
        let twisted = if ea == 1 { (m - kb) % m } else { kb };
        let mut k = (ka + twisted) % m;
        let mut e = ea + eb;
        if e == 2 {
            k = (k + n) % m;
            e = 0;
        }
        k + m * e
    })
}

/// Quaternion group `Q8`.
pub fn quaternion() -> GroupTable {
    dicyclic(2)
}

/// `a × b`, element `(x, y)` at `x·|b| + y`.
pub fn direct_product(a: &GroupTable, b: &GroupTable) -> GroupTable {
    let nb = b.order();
    let mut gens: Vec<usize> = a.generators().iter().map(|&x| x * nb).collect();
    gens.extend(b.generators().iter().copied());
    from_fn(a.order() * nb, gens, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
}

/// `Z_2^k`.
pub fn elementary_abelian(k: usize) -> GroupTable {
    (0..k).fold(cyclic(1), |acc, _| direct_product(&acc, &cyclic(2)))
}

/// Group of permutations (closed under composition, identity included),
/// numbered in lexicographic order; `x·y` applies `x` first.
pub fn permutation_group(mut perms: Vec<Vec<usize>>) -> GroupTable {
    perms.sort();
    perms.dedup();
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|x| {
            perms
                .iter()
                .map(|y| index(&x.iter().map(|&i| y[i]).collect()))
                .collect()
        })
        .collect();
    GroupTable::from_rows(&rows, None).expect("permutation table is a group")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

pub fn symmetric(n: usize) -> GroupTable {
    permutation_group(permutations(n))
}

pub fn alternating(n: usize) -> GroupTable {
    permutation_group(permutations(n).into_iter().filter(|p| is_even(p)).collect())
}

pub fn symmetric3() -> GroupTable {
    symmetric(3)
}

/// Every group of order at most 12, one per isomorphism class.
pub fn corpus() -> Vec<(String, GroupTable)> {
    let z = cyclic;
    let mut out: Vec<(String, GroupTable)> = (1..=12).map(|n| (format!("Z{n}"), z(n))).collect();
    out.extend([
        ("Z2xZ2".to_string(), direct_product(&z(2), &z(2))),
        ("Z2xZ4".to_string(), direct_product(&z(2), &z(4))),
        ("Z2^3".to_string(), elementary_abelian(3)),
        ("Z3xZ3".to_string(), direct_product(&z(3), &z(3))),
        ("Z2xZ6".to_string(), direct_product(&z(2), &z(6))),
        ("S3".to_string(), symmetric3()),
        ("D4".to_string(), dihedral(4)),
        ("Q8".to_string(), quaternion()),
        ("D5".to_string(), dihedral(5)),
        ("D6".to_string(), dihedral(6)),
        ("A4".to_string(), alternating(4)),
        ("Dic3".to_string(), dicyclic(3)),
    ]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(corpus().len(), 24);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        let involutions = (1..8).filter(|&x| q.mul(x, x) == 0).count();
        assert_eq!(involutions, 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(5);
        assert_eq!(d.element_order(1), 5);
        for k in 5..10 {
            assert_eq!(d.mul(k, k), 0);
        }
    }
}
