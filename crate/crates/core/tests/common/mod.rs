//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerics.

#![allow(dead_code)]

use num_complex::Complex64 as C64;

pub type Mat = Vec<Vec<C64>>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> Mat {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Kronecker product with `low` on the least significant index bits.
pub fn kron(high: &Mat, low: &Mat) -> Mat {
    let (h, l) = (high.len(), low.len());
    (0..h * l)
        .map(|i| (0..h * l).map(|j| high[i / l][j / l] * low[i % l][j % l]).collect())
        .collect()
}

pub fn hadamard() -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
}

pub fn hadamard_all(n: usize) -> Mat {
    (0..n).fold(identity(1), |acc, _| kron(&hadamard(), &acc))
}

pub fn z() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn diag(d: &[C64]) -> Mat {
    (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { c(0.0, 0.0) }).collect()).collect()
}

/// f(x) = Σ_m Π_{i ∈ m} x_i over F2, evaluated term by term.
pub fn poly_eval(terms: &[u64], x: u64) -> bool {
    let mut acc = false;
    for &m in terms {
        let mut prod = true;
        for i in 0..64 {
            if m >> i & 1 == 1 && x >> i & 1 == 0 {
                prod = false;
            }
        }
        acc ^= prod;
    }
    acc
}

/// H^{⊗n} · diag((−1)^{f(x)}) · H^{⊗n} as an explicit matrix.
pub fn iqp_matrix(n: usize, terms: &[u64]) -> Mat {
    let phases: Vec<C64> =
        (0..1u64 << n).map(|x| if poly_eval(terms, x) { c(-1.0, 0.0) } else { c(1.0, 0.0) }).collect();
    let h = hadamard_all(n);
    mat_mul(&h, &mat_mul(&diag(&phases), &h))
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// One-sample Kolmogorov–Smirnov test against U[0, 1], with the asymptotic
/// Kolmogorov distribution and Stephens' small-sample correction.
pub fn ks_uniform_p_value(samples: &[f64]) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| f64::max((i as f64 + 1.0) / n - x, x - i as f64 / n))
        .fold(0.0, f64::max);
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// SWAP test run gate by gate on raw amplitudes: |a⟩|b⟩|0⟩_anc, H on the
/// ancilla, a controlled swap of qubits (i, n+i) for each i, H again, then
/// Pr[ancilla = 0].
pub fn swap_test_circuit_oracle(a: &[C64], b: &[C64]) -> f64 {
    let dim = a.len();
    let n = dim.trailing_zeros() as usize;
    let anc = 1usize << (2 * n);
    let mut v = vec![c(0.0, 0.0); 2 * anc];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i | j << n] = x * y;
        }
    }
    let h = |v: &mut Vec<C64>| {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..anc {
            let (lo, hi) = (v[i], v[i | anc]);
            v[i] = (lo + hi) * s;
            v[i | anc] = (lo - hi) * s;
        }
    };
    h(&mut v);
    for q in 0..n {
        let mut next = v.clone();
        for (i, amp) in v.iter().enumerate().skip(anc) {
            let (x, y) = (i >> q & 1, i >> (n + q) & 1);
            let j = (i & !(1 << q) & !(1 << (n + q))) | y << q | x << (n + q);
            next[j] = *amp;
        }
        v = next;
    }
    h(&mut v);
    v[..anc].iter().map(|x| x.norm_sqr()).sum()
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// E_g |⟨0^λ|g|0^λ⟩|² for candidate 3 with i.i.d.-then-dedup monomials.
///
/// Each draw is uniform over the `M` non-constant monomials of degree ≤ d
/// (degree class weighted by its size, then uniform inside it). The
/// deduplicated set is `A` with probability Σ_{B⊆A} (−1)^{|A|−|B|} (|B|/M)^w;
/// for each `A` the overlap is |2^{-λ} Σ_x (−1)^{f_A(x)}|².
pub fn candidate3_identity_overlap(lambda: usize, d: usize, w: usize) -> f64 {
    let monomials: Vec<u64> = (1u64..1 << lambda).filter(|m| m.count_ones() as usize <= d).collect();
    let total = monomials.len();
    assert_eq!(total as f64, (1..=d as u64).map(|k| binomial(lambda as u64, k)).sum::<f64>());
    assert!(total <= 20, "subset enumeration too large");
    let (mut expectation, mut mass) = (0.0, 0.0);
    for a in 0u64..1 << total {
        let size_a = a.count_ones();
        if size_a as usize > w {
            continue;
        }
        // inclusion–exclusion over subsets of `a`
        let mut prob = 0.0;
        let mut b = a;
        loop {
            let sign = if (size_a - b.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            prob += sign * (b.count_ones() as f64 / total as f64).powi(w as i32);
            if b == 0 {
                break;
            }
            b = (b - 1) & a;
        }
        mass += prob;
        if prob == 0.0 {
            continue;
        }
        let terms: Vec<u64> = (0..total).filter(|i| a >> i & 1 == 1).map(|i| monomials[i]).collect();
        let sum: f64 = (0..1u64 << lambda).map(|x| if poly_eval(&terms, x) { -1.0 } else { 1.0 }).sum();
        let overlap = (sum / (1u64 << lambda) as f64).powi(2);
        expectation += prob * overlap;
    }
    assert!((mass - 1.0).abs() < 1e-9, "subset probabilities sum to {mass}");
    expectation
}

/// Three binomial standard errors of a rate `p` over `n` trials.
pub fn three_sigma(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

pub fn rate<F: FnMut() -> bool>(trials: usize, mut f: F) -> f64 {
    (0..trials).filter(|_| f()).count() as f64 / trials as f64
}
