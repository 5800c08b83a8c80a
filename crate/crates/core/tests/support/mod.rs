//! Reference computations that avoid the library's factorizations. Hermitian
//! spectra come from bisection on inertia counts; spectra of non-Hermitian
//! products come from characteristic polynomials (Faddeev–LeVerrier) and
//! their roots (Durand–Kerner with Newton polishing).

#![allow(dead_code)]

use dualnorm_core::{CMatrix, Field, C64};

type Dense = Vec<Vec<C64>>;

pub fn dense(a: &CMatrix) -> Dense {
    a.to_rows()
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![C64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

fn adjoint(a: &Dense) -> Dense {
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|j| (0..n).map(|i| a[i][j].conj()).collect()).collect()
}

fn trace(a: &Dense) -> C64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Coefficients `c[0..=n]` of `det(λI − A) = Σ c[k] λ^k`, `c[n] = 1`.
pub fn char_poly(a: &Dense) -> Vec<C64> {
    let n = a.len();
    let mut c = vec![C64::new(0.0, 0.0); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += c[n + 1 - k];
        }
        m = mul(a, &m);
        c[n - k] = -trace(&m) / k as f64;
    }
    c
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut v = C64::new(0.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

/// Roots of a monic polynomial.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut moved = 0.0_f64;
        for i in 0..n {
            let (v, _) = horner(c, z[i]);
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = v / den;
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..3 {
            let (v, d) = horner(c, *r);
            if d.norm() > 0.0 {
                *r -= v / d;
            }
        }
    }
    z
}

pub fn eigenvalues(a: &Dense) -> Vec<C64> {
    poly_roots(&char_poly(a))
}

/// Number of negative pivots in the LDL* factorization of `G − σI`, which by
/// Sylvester's law of inertia counts the eigenvalues of Hermitian `G` below `σ`.
fn count_below(g: &Dense, sigma: f64, floor: f64) -> usize {
    let n = g.len();
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut d = vec![0.0_f64; n];
    let mut negative = 0;
    for j in 0..n {
        let mut dj = g[j][j].re - sigma;
        for k in 0..j {
            dj -= l[j][k].norm_sqr() * d[k];
        }
        if dj.abs() < floor {
            dj = -floor;
        }
        d[j] = dj;
        negative += usize::from(dj < 0.0);
        for i in j + 1..n {
            let mut x = g[i][j];
            for k in 0..j {
                x -= l[i][k] * l[j][k].conj() * d[k];
            }
            l[i][j] = x / dj;
        }
    }
    negative
}

/// Ascending eigenvalues of a Hermitian matrix by bisection on inertia counts.
pub fn hermitian_spectrum(g: &Dense) -> Vec<f64> {
    let bound = frobenius(g).max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * bound * 1e-3;
    (0..g.len())
        .map(|k| {
            let (mut lo, mut hi) = (-bound * 1.01, bound * 1.01);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(g, mid, floor) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Squared singular values of `a`, clamped at zero.
pub fn gram_spectrum(a: &CMatrix) -> Vec<f64> {
    let d = dense(a);
    hermitian_spectrum(&mul(&adjoint(&d), &d)).into_iter().map(|x| x.max(0.0)).collect()
}

fn frobenius(a: &Dense) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `(Tr (A*A)^{p/2})^{1/p}`, or the largest singular value for `p = ∞`.
pub fn schatten_norm(a: &CMatrix, p: f64) -> f64 {
    let lam = gram_spectrum(a);
    if p.is_infinite() {
        return lam.iter().fold(0.0_f64, |m, &x| m.max(x)).sqrt();
    }
    lam.iter().map(|&x| x.powf(p / 2.0)).sum::<f64>().powf(1.0 / p)
}

/// `(Σ dim · Tr |H|ᵖ)^{1/p}` over the blocks of a field.
pub fn field_schatten_norm(h: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return h.blocks().iter().map(|b| schatten_norm(b, p)).fold(0.0, f64::max);
    }
    h.iter()
        .map(|(dim, b)| dim as f64 * schatten_norm(b, p).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `Σ dim · Tr(H F)`.
pub fn pairing(h: &Field, f: &Field) -> C64 {
    h.iter()
        .zip(f.blocks())
        .map(|((dim, a), b)| trace(&mul(&dense(a), &dense(b))) * dim as f64)
        .sum()
}

/// `Σ λ^s` over the eigenvalues of `AB`, which are real and non-negative for
/// PSD `A`, `B`.
pub fn trace_power_of_product(a: &CMatrix, b: &CMatrix, s: f64) -> f64 {
    let ab = mul(&dense(a), &dense(b));
    eigenvalues(&ab).into_iter().map(|z| z.re.max(0.0).powf(s)).sum()
}

/// `(2^{-n} Σ_θ ‖Σ θⱼ Hⱼ‖^r)^{1/r}` visiting every sign pattern directly,
/// together with the number of patterns visited.
pub fn rademacher_by_enumeration(fields: &[Field], norm: impl Fn(&Field) -> f64, r: f64) -> (f64, usize) {
    let n = fields.len();
    let mut total = 0.0;
    let mut visited = 0usize;
    for mask in 0u64..(1u64 << n) {
        let mut sum = Field::zeros(fields[0].model().clone());
        for (j, f) in fields.iter().enumerate() {
            let sign = if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
            sum = sum.add(&f.scale_real(sign)).unwrap_or_else(|e| panic!("{e}"));
        }
        total += norm(&sum).powf(r);
        visited += 1;
    }
    ((total / visited as f64).powf(1.0 / r), visited)
}
