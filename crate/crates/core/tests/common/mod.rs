//! Independent oracles shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use hvnogo_core::opalg::{Monomial, Polynomial};
use hvnogo_core::random::{random_unit_vector, random_unitary};
use hvnogo_core::valuation::ks_catalog;
use hvnogo_core::{Complex64, DVector, HermitianOperator};
use rand::seq::SliceRandom;
use rand::Rng;

/// Exhaustive 0/1 enumeration. Orthogonal pairs and complete bases are read
/// straight off the inner products; no clique machinery is involved.
pub fn brute_force_sat(vectors: &[DVector<Complex64>], dim: usize) -> bool {
    let n = vectors.len();
    assert!(n <= 24, "brute force limited to small sets");
    let mut ortho = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && vectors[i].dotc(&vectors[j]).norm() <= 1e-10 {
                ortho[i] |= 1 << j;
            }
        }
    }
    let mut bases = Vec::new();
    collect_bases(&ortho, dim, 0, 0, 0, &mut bases);
    let pairs: Vec<u32> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| ortho[i] >> j & 1 == 1)
        .map(|(i, j)| (1u32 << i) | (1 << j))
        .collect();
    (0u64..(1u64 << n)).any(|mask| {
        let mask = mask as u32;
        pairs.iter().all(|&p| mask & p != p) && bases.iter().all(|&b| mask & b != 0)
    })
}

fn collect_bases(
    ortho: &[u32],
    dim: usize,
    start: usize,
    chosen: u32,
    size: usize,
    out: &mut Vec<u32>,
) {
    if size == dim {
        out.push(chosen);
        return;
    }
    for v in start..ortho.len() {
        if ortho[v] & chosen == chosen {
            collect_bases(ortho, dim, v + 1, chosen | (1 << v), size + 1, out);
        }
    }
}

fn real(v: &[f64]) -> DVector<Complex64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x / n, 0.0)))
}

fn push_unique(pool: &mut Vec<DVector<Complex64>>, v: DVector<Complex64>) {
    if !pool.iter().any(|w| w.dotc(&v).norm() >= 1.0 - 1e-10) {
        pool.push(v);
    }
}

/// Rays with components in {-1, 0, 1} in the given dimension, plus the catalog set for that dimension.
pub fn ray_pool(dim: usize) -> Vec<DVector<Complex64>> {
    let mut pool = Vec::new();
    if let Some(name) = match dim {
        3 => Some("peres33"),
        4 => Some("cabello18"),
        _ => None,
    } {
        for v in ks_catalog(name).unwrap().vectors() {
            push_unique(&mut pool, v.clone());
        }
    }
    let total = 3usize.pow(dim as u32);
    for code in 1..total {
        let mut c = code;
        let comps: Vec<f64> = (0..dim)
            .map(|_| {
                let d = (c % 3) as f64 - 1.0;
                c /= 3;
                d
            })
            .collect();
        if comps.iter().any(|&x| x != 0.0) {
            push_unique(&mut pool, real(&comps));
        }
    }
    pool
}

/// Random small vector sets in dimension 2–4 with plenty of orthogonality; about
/// a quarter of the dimension-4 draws contain the full 18-vector catalog set.
pub fn random_small_set<R: Rng>(
    rng: &mut R,
    pools: &[Vec<DVector<Complex64>>; 3],
) -> (usize, Vec<DVector<Complex64>>) {
    let dim = rng.random_range(2..=4);
    let pool = &pools[dim - 2];
    if dim == 4 && rng.random_bool(0.25) {
        let mut vecs: Vec<_> = ks_catalog("cabello18").unwrap().vectors().to_vec();
        let extra = rng.random_range(0..=2);
        let mut rest: Vec<_> = pool
            .iter()
            .filter(|v| !vecs.iter().any(|w| w.dotc(v).norm() > 1.0 - 1e-10))
            .cloned()
            .collect();
        rest.shuffle(rng);
        vecs.extend(rest.into_iter().take(extra));
        vecs.shuffle(rng);
        return (dim, vecs);
    }
    let k = rng.random_range(1..=20.min(pool.len()));
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.shuffle(rng);
    (dim, idx[..k].iter().map(|&i| pool[i].clone()).collect())
}

pub fn pools() -> [Vec<DVector<Complex64>>; 3] {
    [ray_pool(2), ray_pool(3), ray_pool(4)]
}

/// Commuting family `U diag(dᵢ) U†` with small-integer diagonals sharing a random
/// unitary. The diagonals are returned too: row `k` of the joint spectrum is `(d₁[k], d₂[k], …)`.
pub fn random_commuting_family<R: Rng>(
    rng: &mut R,
    max_dim: usize,
) -> (Vec<HermitianOperator>, Vec<Vec<f64>>) {
    let dim = rng.random_range(1..=max_dim);
    let count = rng.random_range(1..=3);
    let u = random_unitary(dim, rng);
    let diags: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.random_range(-1..=2) as f64).collect())
        .collect();
    let ops = diags
        .iter()
        .map(|d| HermitianOperator::conjugated_diagonal(&u, d))
        .collect();
    (ops, diags)
}

/// Integer-coefficient polynomial of degree at most 3. Half of the draws are
/// products of linear factors `(x_i − c)` so that vanishing cases occur.
pub fn random_polynomial<R: Rng>(rng: &mut R, vars: usize) -> Polynomial {
    if rng.random_bool(0.5) {
        let factors = rng.random_range(1..=3);
        let mut poly = Polynomial::new(vec![Monomial {
            coeff: 1.0,
            powers: vec![0; vars],
        }]);
        for _ in 0..factors {
            let var = rng.random_range(0..vars);
            let c = rng.random_range(-1..=2) as f64;
            let mut x = vec![0; vars];
            x[var] = 1;
            let factor = [
                Monomial {
                    coeff: 1.0,
                    powers: x,
                },
                Monomial {
                    coeff: -c,
                    powers: vec![0; vars],
                },
            ];
            let mut terms = Vec::new();
            for t in &poly.terms {
                for f in &factor {
                    terms.push(Monomial {
                        coeff: t.coeff * f.coeff,
                        powers: t.powers.iter().zip(&f.powers).map(|(a, b)| a + b).collect(),
                    });
                }
            }
            poly = Polynomial::new(terms);
        }
        poly
    } else {
        let terms = (0..rng.random_range(1..=4))
            .map(|_| {
                let mut powers = vec![0u32; vars];
                let deg = rng.random_range(0..=3);
                for _ in 0..deg {
                    powers[rng.random_range(0..vars)] += 1;
                }
                Monomial {
                    coeff: rng.random_range(-3..=3) as f64,
                    powers,
                }
            })
            .collect();
        Polynomial::new(terms)
    }
}

/// Eigenvalues of a 2x2 Hermitian matrix `[[p, q], [q*, r]]` in closed form.
pub fn eig2(p: f64, r: f64, q: Complex64) -> (f64, f64) {
    let mean = (p + r) / 2.0;
    let rad = (((p - r) / 2.0).powi(2) + q.norm_sqr()).sqrt();
    (mean - rad, mean + rad)
}

/// Grid search over 2x2 Hermitian `H = [[h11, h12], [h12*, h22]]` with step 0.01.
/// A point is accepted when all four of `H`, `A − H`, `B − H`, `I − A − B + H`
/// have minimum eigenvalue at least `−margin`.
pub fn grid_feasible(a: &HermitianOperator, b: &HermitianOperator, margin: f64) -> bool {
    let am = a.matrix();
    let bm = b.matrix();
    let step = 0.01;
    let h11_max = am[(0, 0)].re.min(bm[(0, 0)].re) + margin;
    let h22_max = am[(1, 1)].re.min(bm[(1, 1)].re) + margin;
    let steps = |max: f64| (max / step).floor() as i64;
    for i in 0..=steps(h11_max) {
        let h11 = i as f64 * step;
        for j in 0..=steps(h22_max) {
            let h22 = j as f64 * step;
            let radius = (h11 * h22).sqrt() + margin;
            let k = (radius / step).floor() as i64;
            for re in -k..=k {
                for im in -k..=k {
                    let q = Complex64::new(re as f64 * step, im as f64 * step);
                    if q.norm() > radius {
                        continue;
                    }
                    let ok = |p: f64, r: f64, q: Complex64| eig2(p, r, q).0 >= -margin;
                    if ok(h11, h22, q)
                        && ok(am[(0, 0)].re - h11, am[(1, 1)].re - h22, am[(0, 1)] - q)
                        && ok(bm[(0, 0)].re - h11, bm[(1, 1)].re - h22, bm[(0, 1)] - q)
                        && ok(
                            1.0 - am[(0, 0)].re - bm[(0, 0)].re + h11,
                            1.0 - am[(1, 1)].re - bm[(1, 1)].re + h22,
                            -am[(0, 1)] - bm[(0, 1)] + q,
                        )
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Rank-1 qubit projection pairs: a quarter identical (up to phase), a quarter
/// orthogonal, the rest with overlap `|⟨a|b⟩|` in `[0.3, 0.95]`.
pub fn random_projection_pair<R: Rng>(rng: &mut R) -> (HermitianOperator, HermitianOperator) {
    let a = random_unit_vector(2, rng);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let perp = DVector::from_vec(vec![-a[1].conj(), a[0].conj()]);
    let b = match rng.random_range(0..4) {
        0 => a.clone() * phase,
        1 => perp * phase,
        _ => {
            let c: f64 = rng.random_range(0.3..0.95);
            let rel = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            (a.clone() * Complex64::new(c, 0.0) + perp * (rel * (1.0 - c * c).sqrt())) * phase
        }
    };
    (
        HermitianOperator::projector(&a),
        HermitianOperator::projector(&b),
    )
}
