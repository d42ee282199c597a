//! Reference computations that share no code with the library's linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C;

pub type M4 = [[C; 4]; 4];

pub fn mul(a: &M4, b: &M4) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn trace(a: &M4) -> C {
    (0..4).map(|i| a[i][i]).sum()
}

/// Coefficients `c[0..=4]` of `det(x I - A) = Σ c_k x^k`, by Faddeev-LeVerrier.
pub fn char_poly(a: &M4) -> [C; 5] {
    let mut c = [C::new(0.0, 0.0); 5];
    c[4] = C::new(1.0, 0.0);
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for k in 1..=4 {
        let am = mul(a, &m);
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = am[i][j];
            }
            m[i][i] += c[4 - k + 1];
        }
        c[4 - k] = -trace(&mul(a, &m)) / k as f64;
    }
    c
}

fn horner(c: &[C; 5], x: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, &ck| acc * x + ck)
}

/// All four roots of a monic quartic by Durand-Kerner iteration.
pub fn quartic_roots(c: &[C; 5]) -> [C; 4] {
    let bound = 1.0 + (0..4).map(|k| c[k].norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z = [C::new(0.0, 0.0); 4];
    for (k, zk) in z.iter_mut().enumerate() {
        *zk = seed.powu(k as u32 + 1) * bound;
    }
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..4 {
            let mut den = C::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 {
            break;
        }
    }
    z
}

/// Real parts of the characteristic roots, descending, each polished by
/// Newton steps on the real polynomial.
pub fn real_spectrum(a: &M4) -> [f64; 4] {
    let c = char_poly(a);
    let re: [f64; 5] = c.map(|x| x.re);
    let mut out = quartic_roots(&c).map(|z| z.re);
    let p = |x: f64| re.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
    let dp = |x: f64| (1..5).rev().fold(0.0, |acc, k| acc * x + k as f64 * re[k]);
    for x in out.iter_mut() {
        for _ in 0..3 {
            // near a multiple root the derivative vanishes; keep only improving steps
            let next = *x - p(*x) / dp(*x);
            if next.is_finite() && p(next).abs() < p(*x).abs() {
                *x = next;
            }
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

fn sigma_yy() -> M4 {
    // σ_y ⊗ σ_y written out
    let z = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    [[z, z, z, -one], [z, z, one, z], [z, one, z, z], [-one, z, z, z]]
}

/// Wootters concurrence from the raw roots of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
pub fn wootters(rho: &M4) -> f64 {
    let yy = sigma_yy();
    let conj = rho.map(|row| row.map(|z| z.conj()));
    let tilde = mul(&mul(&yy, &conj), &yy);
    let mut lam = real_spectrum(&mul(rho, &tilde)).map(|v| v.max(0.0).sqrt());
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// Concurrence of `Σ |v_i⟩⟨v_i|` for two subnormalized kets, from the
/// singular values of `τ_ij = v_iᵀ (σy⊗σy) v_j`: `C = max(0, σ1 - σ2)` with
/// `(σ1 - σ2)² = ‖τ‖² - 2 |det τ|`.
pub fn wootters_rank_two(v: [[C; 4]; 2]) -> f64 {
    let yy = sigma_yy();
    let form = |a: &[C; 4], b: &[C; 4]| -> C {
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| a[i] * yy[i][j] * b[j])
            .sum()
    };
    let t = [[form(&v[0], &v[0]), form(&v[0], &v[1])], [form(&v[1], &v[0]), form(&v[1], &v[1])]];
    let frob: f64 = t.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (t[0][0] * t[1][1] - t[0][1] * t[1][0]).norm();
    (frob - 2.0 * det).max(0.0).sqrt()
}

/// `G G† / tr(G G†)` from 32 reals.
pub fn density_from(seed: &[f64]) -> M4 {
    let mut g = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = C::new(seed[8 * i + 2 * j], seed[8 * i + 2 * j + 1]);
        }
    }
    let gd = {
        let mut t = [[C::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = g[j][i].conj();
            }
        }
        t
    };
    let m = mul(&g, &gd);
    let tr = trace(&m).re;
    m.map(|row| row.map(|z| z / tr))
}

/// Werner state `r |ψ⁺⟩⟨ψ⁺| + (1 - r) I/4` in the computational basis.
pub fn werner(r: f64) -> M4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[i][j] = C::new(r / 2.0, 0.0);
    }
    for i in 0..4 {
        m[i][i] += C::new((1.0 - r) / 4.0, 0.0);
    }
    m
}

/// Number of eigenvalues of Hermitian `a` below `x`: the count of negative
/// pivots in the LDL† factorization of `a - x I` (Sylvester's law of inertia).
fn count_below(a: &M4, x: f64) -> usize {
    let mut l = [[C::new(0.0, 0.0); 4]; 4];
    let mut d = [0.0f64; 4];
    let scale = 1e-300f64.max(a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max) * 1e-300);
    for k in 0..4 {
        let mut dk = a[k][k].re - x;
        for j in 0..k {
            dk -= l[k][j].norm_sqr() * d[j];
        }
        if dk == 0.0 {
            dk = -scale;
        }
        d[k] = dk;
        for i in k + 1..4 {
            let mut s = a[i][k];
            for j in 0..k {
                s -= l[i][j] * l[k][j].conj() * d[j];
            }
            l[i][k] = s / dk;
        }
    }
    d.iter().filter(|&&v| v < 0.0).count()
}

/// Spectrum of a Hermitian matrix, descending, by bisection on inertia
/// counts. Exact multiplicities are handled without special cases.
pub fn inertia_spectrum(a: &M4) -> [f64; 4] {
    let radius = (0..4)
        .map(|i| a[i][i].re.abs() + (0..4).filter(|&j| j != i).map(|j| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        // k-th smallest: least x with count_below(x) > k
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(a, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        *slot = 0.5 * (lo + hi);
    }
    out.reverse();
    out
}

/// Lower-triangular `L` with `L L† = a` for positive semidefinite `a`;
/// columns with a vanishing pivot are left zero.
pub fn cholesky_psd(a: &M4) -> M4 {
    let mut l = [[C::new(0.0, 0.0); 4]; 4];
    for j in 0..4 {
        let mut p = a[j][j].re;
        for k in 0..j {
            p -= l[j][k].norm_sqr();
        }
        if p <= 1e-15 {
            continue;
        }
        let p = p.sqrt();
        l[j][j] = C::new(p, 0.0);
        for i in j + 1..4 {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / p;
        }
    }
    l
}

/// Wootters concurrence from the ensemble given by the Cholesky columns:
/// the `λ_i` are the singular values of `τ = Lᵀ (σy⊗σy) L`.
pub fn wootters_ensemble(rho: &M4) -> f64 {
    let l = cholesky_psd(rho);
    let yy = sigma_yy();
    let mut lt = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            lt[i][j] = l[j][i];
        }
    }
    let tau = mul(&mul(&lt, &yy), &l);
    let mut tau_h = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            tau_h[i][j] = tau[j][i].conj();
        }
    }
    let s = inertia_spectrum(&mul(&tau_h, &tau)).map(|v| v.max(0.0).sqrt());
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}
