//! Independent straight-line reference implementations used as test oracles.
//! Nothing here calls into the crate under test.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random m×n matrix with cells in [0, 1].
pub fn unit_matrix(rng: &mut impl Rng, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect()
}

/// Random point on the simplex (normalized uniforms).
pub fn simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

pub fn saw(r: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in r {
        let mut s = 0.0;
        for j in 0..w.len() {
            s += w[j] * row[j];
        }
        out.push(s);
    }
    out
}

pub fn wp(r: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in r {
        let mut p = 1.0;
        for j in 0..w.len() {
            if w[j] > 0.0 {
                p *= row[j].powf(w[j]);
            }
        }
        out.push(p);
    }
    out
}

pub fn wdi2(r: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in r {
        let mut s = 0.0;
        for j in 0..w.len() {
            s += (w[j] * row[j]).powi(2);
        }
        out.push(s.sqrt());
    }
    out
}

pub fn wdi_inf(r: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in r {
        let mut best = f64::MAX;
        for j in 0..w.len() {
            if w[j] * row[j] < best {
                best = w[j] * row[j];
            }
        }
        out.push(best);
    }
    out
}

pub fn topsis(r: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let m = r.len();
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..m {
        let mut dminus = 0.0;
        let mut dplus = 0.0;
        for j in 0..n {
            let mut lo = f64::MAX;
            let mut hi = f64::MIN;
            for k in 0..m {
                lo = lo.min(w[j] * r[k][j]);
                hi = hi.max(w[j] * r[k][j]);
            }
            let v = w[j] * r[i][j];
            dminus += (v - lo).powi(2);
            dplus += (v - hi).powi(2);
        }
        out.push(dminus.sqrt() / (dminus.sqrt() + dplus.sqrt()));
    }
    out
}

/// Tie-free ranks by counting smaller elements.
pub fn count_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|a| 1.0 + x.iter().filter(|b| *b < a).count() as f64)
        .collect()
}

/// Rank-difference form of Spearman's rho (no ties).
pub fn spearman_eq6(a: &[f64], b: &[f64]) -> f64 {
    let ra = count_ranks(a);
    let rb = count_ranks(b);
    let n = a.len() as f64;
    let mut d2 = 0.0;
    for i in 0..a.len() {
        d2 += (ra[i] - rb[i]).powi(2);
    }
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// `D(p) · ρ(x, r0)` for a tie-free positive vector.
pub fn information_term(x: &[f64], r0: &[f64]) -> f64 {
    let lnm = (x.len() as f64).ln();
    let total: f64 = x.iter().sum();
    let mut ent = 0.0;
    for v in x {
        let p = v / total;
        if p > 0.0 {
            ent += p * p.ln();
        }
    }
    (1.0 + ent / lnm) * spearman_eq6(x, r0)
}

/// Direct transcription of the information-loss formula for tie-free data.
pub fn ssm_loss(x: &[Vec<f64>], w: &[f64], ci: &[f64], r0: &[f64]) -> f64 {
    let mut left = 0.0;
    for j in 0..w.len() {
        let col: Vec<f64> = x.iter().map(|row| row[j]).collect();
        left += w[j] * information_term(&col, r0);
    }
    (left - information_term(ci, r0)).abs()
}

/// Solves `a x = b` by Gauss–Jordan elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        b.swap(c, p);
        let piv = a[c][c];
        for k in c..n {
            a[c][k] /= piv;
        }
        b[c] /= piv;
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for k in c..n {
                        a[r][k] -= f * a[c][k];
                    }
                    b[r] -= f * b[c];
                }
            }
        }
    }
    b
}

/// Least squares through the normal equations.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = x[0].len();
    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for (row, yi) in x.iter().zip(y) {
        for a in 0..k {
            xty[a] += row[a] * yi;
            for b in 0..k {
                xtx[a][b] += row[a] * row[b];
            }
        }
    }
    solve(xtx, xty)
}

/// Sample standard deviation, written out directly.
pub fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// kgCO₂ of a consumption bundle written as an explicit linear combination.
pub fn emissions(coal: f64, oil: f64, gas: f64, kwh: f64, grid_factor: f64) -> f64 {
    coal * 1.978 + oil * 3.065 + gas * 1.809 + kwh * grid_factor
}
