//! Direct solver for symmetric positive definite cyclic banded systems.
//!
//! The matrix is split as `[[B, C], [C^T, E]]` where the last `p` unknowns
//! form the border. `B` is banded without wrap-around and is factored by
//! banded Cholesky; the wrap-around couplings are eliminated through the
//! `p x p` Schur complement `E - C^T B^-1 C`.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CyclicBandedSpd {
    n: usize,
    p: usize,
    /// Row `i` holds `L[i][i-p..=i]`, left-padded for the first rows.
    chol: Vec<f64>,
    /// Coupling block `C`, row-major `(n - p) x p`.
    c: Vec<f64>,
    /// `B^-1 C`, row-major `(n - p) x p`.
    y: Vec<f64>,
    /// Cholesky factor of the Schur complement, row-major `p x p`.
    schur: Vec<f64>,
}

impl CyclicBandedSpd {
    /// Factors the matrix whose upper band is `bands[k][i] = A[i][(i + k) mod n]`.
    pub fn factor(bands: &[Vec<f64>]) -> Result<Self> {
        let p = bands.len() - 1;
        let n = bands[0].len();
        if n <= 3 * p {
            return Err(Error::Solver(format!(
                "system of size {n} too small for half bandwidth {p}"
            )));
        }
        let m = n - p;
        let w = p + 1;
        let mut b = vec![0.0; m * w];
        let mut c = vec![0.0; m * p];
        let mut e = vec![0.0; p * p];
        for (k, band) in bands.iter().enumerate() {
            for (i, &v) in band.iter().enumerate() {
                let j = (i + k) % n;
                let (r, s) = if i <= j { (i, j) } else { (j, i) };
                if k == 0 {
                    if r < m {
                        b[r * w + p] += v;
                    } else {
                        e[(r - m) * p + (r - m)] += v;
                    }
                    continue;
                }
                match (r < m, s < m) {
                    (true, true) => b[s * w + p - (s - r)] += v,
                    (true, false) => c[r * p + (s - m)] += v,
                    (false, false) => {
                        e[(r - m) * p + (s - m)] += v;
                        e[(s - m) * p + (r - m)] += v;
                    }
                    (false, true) => unreachable!("ordered pair"),
                }
            }
        }

        for i in 0..m {
            let lo = i.saturating_sub(p);
            for j in lo..=i {
                let jlo = j.saturating_sub(p).max(lo);
                let mut sum = b[i * w + p - (i - j)];
                for q in jlo..j {
                    sum -= b[i * w + p - (i - q)] * b[j * w + p - (j - q)];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::Solver(format!(
                            "matrix not positive definite at row {i}"
                        )));
                    }
                    b[i * w + p] = sum.sqrt();
                } else {
                    b[i * w + p - (i - j)] = sum / b[j * w + p];
                }
            }
        }

        let mut solver = Self {
            n,
            p,
            chol: b,
            c,
            y: vec![0.0; m * p],
            schur: e,
        };
        let mut col = vec![0.0; m];
        for q in 0..p {
            for i in 0..m {
                col[i] = solver.c[i * p + q];
            }
            solver.band_solve(&mut col);
            for i in 0..m {
                solver.y[i * p + q] = col[i];
            }
        }
        for a in 0..p {
            for bq in 0..p {
                let dot: f64 = (0..m).map(|i| solver.c[i * p + a] * solver.y[i * p + bq]).sum();
                solver.schur[a * p + bq] -= dot;
            }
        }
        dense_cholesky(&mut solver.schur, p)?;
        Ok(solver)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn band_solve(&self, x: &mut [f64]) {
        let (p, w) = (self.p, self.p + 1);
        let m = x.len();
        for i in 0..m {
            let mut s = x[i];
            for q in i.saturating_sub(p)..i {
                s -= self.chol[i * w + p - (i - q)] * x[q];
            }
            x[i] = s / self.chol[i * w + p];
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            for q in i + 1..(i + p + 1).min(m) {
                s -= self.chol[q * w + p - (q - i)] * x[q];
            }
            x[i] = s / self.chol[i * w + p];
        }
    }

    /// Solves `A x = rhs` in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let (n, p) = (self.n, self.p);
        let m = n - p;
        let (head, tail) = rhs.split_at_mut(m);
        self.band_solve(head);
        let mut t: Vec<f64> = (0..p)
            .map(|a| tail[a] - (0..m).map(|i| self.c[i * p + a] * head[i]).sum::<f64>())
            .collect();
        dense_cholesky_solve(&self.schur, p, &mut t);
        for i in 0..m {
            head[i] -= (0..p).map(|q| self.y[i * p + q] * t[q]).sum::<f64>();
        }
        tail.copy_from_slice(&t);
    }
}

fn dense_cholesky(a: &mut [f64], p: usize) -> Result<()> {
    for i in 0..p {
        for j in 0..=i {
            let mut sum = a[i * p + j];
            for q in 0..j {
                sum -= a[i * p + q] * a[j * p + q];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::Solver("border block not positive definite".into()));
                }
                a[i * p + i] = sum.sqrt();
            } else {
                a[i * p + j] = sum / a[j * p + j];
            }
        }
        for j in i + 1..p {
            a[i * p + j] = 0.0;
        }
    }
    Ok(())
}

fn dense_cholesky_solve(l: &[f64], p: usize, x: &mut [f64]) {
    for i in 0..p {
        let s: f64 = (0..i).map(|q| l[i * p + q] * x[q]).sum();
        x[i] = (x[i] - s) / l[i * p + i];
    }
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|q| l[q * p + i] * x[q]).sum();
        x[i] = (x[i] - s) / l[i * p + i];
    }
}

/// `A x` for the matrix given in band form.
pub fn band_multiply(bands: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for (k, band) in bands.iter().enumerate() {
        for i in 0..n {
            let j = (i + k) % n;
            out[i] += band[i] * x[j];
            if k > 0 {
                out[j] += band[i] * x[i];
            }
        }
    }
    out
}
