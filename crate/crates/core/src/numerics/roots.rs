//! Real roots of real polynomials, with multiplicity estimation.
//!
//! Route: balanced companion matrix → Francis double-shift QR for the
//! eigenvalues → cluster near-coincident candidates → estimate multiplicity
//! by a derivative-vanishing cascade → Newton-polish on the `(m-1)`-th
//! derivative, which sees a multiplicity-`m` root as simple. The polish is
//! iterated to a residual target rather than stopped after one step; a
//! single step loses half the digits at double roots.
//!
//! Coefficients are ascending: `coeffs[i]` multiplies `x^i`.

use super::{NumericsError, MAX_POLY_DEGREE, ZERO_POLY_FLOOR};

/// A real root together with its estimated multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootWithMultiplicity {
    pub root: f64,
    pub multiplicity: usize,
}

/// Horner evaluation.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Coefficients of the derivative polynomial.
pub fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

/// Residual tolerance at which `r` counts as a root of `coeffs`:
/// `1e-9 · max|coeff| · max(1,|r|)^deg`.
fn root_tolerance(coeffs: &[f64], r: f64) -> f64 {
    let max_c = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let deg = coeffs.len().saturating_sub(1) as i32;
    1e-9 * max_c * r.abs().max(1.0).powi(deg)
}

/// All real roots of the polynomial, sorted ascending, with multiplicities.
///
/// Trailing coefficients below `1e-14` relative to the largest are trimmed
/// to find the effective degree. A degree-0 nonzero polynomial has no roots;
/// an identically-zero polynomial (all coefficients below the absolute
/// floor) is an error because every value is a root.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<RootWithMultiplicity>, NumericsError> {
    let max_abs = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if max_abs < ZERO_POLY_FLOOR {
        return Err(NumericsError::ZeroPolynomial);
    }
    // Effective degree: drop leading terms that are numerically zero.
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * max_abs {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > MAX_POLY_DEGREE {
        return Err(NumericsError::DimensionCap {
            got: deg,
            cap: MAX_POLY_DEGREE,
        });
    }
    let p = &coeffs[..=deg];

    if deg == 1 {
        let r = -p[0] / p[1];
        return Ok(vec![RootWithMultiplicity {
            root: r,
            multiplicity: 1,
        }]);
    }

    // Monic companion matrix, balanced, then its eigenvalues.
    let lead = p[deg];
    let mut companion = vec![vec![0.0; deg]; deg];
    for i in 1..deg {
        companion[i][i - 1] = 1.0;
    }
    for i in 0..deg {
        companion[i][deg - 1] = -p[i] / lead;
    }
    balance(&mut companion);
    let eigen = hessenberg_qr_eigenvalues(&mut companion)?;

    // Real candidates: real eigenvalues plus complex ones close to the real
    // axis. A multiple real root perturbs into a cluster of eigenvalues that
    // may carry spurious imaginary parts of order eps^(1/m), so the axis
    // tolerance is generous; the residual gate below rejects impostors.
    let mut candidates: Vec<f64> = eigen
        .iter()
        .filter(|(re, im)| im.abs() <= 2e-4 * re.abs().max(1.0))
        .map(|(re, _)| *re)
        .collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Cluster nearby candidates, polish each cluster at the best-validating
    // multiplicity, then merge polished duplicates.
    let derivs = derivative_tower(p);
    let mut polished: Vec<RootWithMultiplicity> = Vec::new();
    let mut i = 0;
    while i < candidates.len() {
        let mut j = i + 1;
        let cluster_tol = 1e-6 * candidates[i].abs().max(1.0);
        while j < candidates.len() && candidates[j] - candidates[j - 1] <= cluster_tol {
            j += 1;
        }
        let center = candidates[i..j].iter().sum::<f64>() / (j - i) as f64;
        // A multiplicity-m root can scatter its eigenvalue cluster over a
        // radius ~ eps^(1/m); everything within that coarse radius bounds
        // the multiplicity worth trying.
        let coarse = 1e-3 * center.abs().max(1.0);
        let m_max = candidates
            .iter()
            .filter(|c| (*c - center).abs() <= coarse)
            .count()
            .clamp(1, deg);
        if let Some(rm) = refine_root(&derivs, center, m_max) {
            polished.push(rm);
        }
        i = j;
    }

    polished.sort_by(|a, b| a.root.partial_cmp(&b.root).unwrap());
    let mut out: Vec<RootWithMultiplicity> = Vec::new();
    for rm in polished {
        match out.last_mut() {
            Some(last) if (last.root - rm.root).abs() <= 1e-7 * rm.root.abs().max(1.0) => {
                last.multiplicity = last.multiplicity.max(rm.multiplicity);
            }
            _ => out.push(rm),
        }
    }
    Ok(out)
}

/// `derivs[j]` holds the coefficients of the j-th derivative, `derivs[0] = p`.
fn derivative_tower(p: &[f64]) -> Vec<Vec<f64>> {
    let mut tower = vec![p.to_vec()];
    while tower.last().unwrap().len() > 1 {
        tower.push(poly_derivative(tower.last().unwrap()));
    }
    tower
}

/// Estimate the multiplicity at `x`: the number of leading derivatives
/// (including the value itself) that vanish within their own tolerance.
fn multiplicity_at(derivs: &[Vec<f64>], x: f64) -> usize {
    let mut m = 0;
    for d in derivs.iter() {
        if poly_eval(d, x).abs() <= root_tolerance(d, x) {
            m += 1;
        } else {
            break;
        }
    }
    m
}

/// Polish a cluster center into a validated root.
///
/// Tries multiplicities from `m_max` down to 1. For each trial `m` the guess
/// is Newton-polished on the `(m-1)`-th derivative (where a multiplicity-`m`
/// root is simple, so the polish converges quadratically to full precision),
/// then validated: the polish must not wander far from the guess and all
/// derivatives below order `m` must vanish within tolerance at the polished
/// point. The first multiplicity that validates wins.
fn refine_root(derivs: &[Vec<f64>], guess: f64, m_max: usize) -> Option<RootWithMultiplicity> {
    let wander = 1e-2 * guess.abs().max(1.0);
    let m_hi = m_max.min(derivs.len() - 1).max(1);
    for m in (1..=m_hi).rev() {
        let q = &derivs[m - 1];
        let dq = &derivs[m];
        let mut r = guess;
        let mut ok = true;
        for _ in 0..12 {
            let f = poly_eval(q, r);
            let df = poly_eval(dq, r);
            if df.abs() < 1e-300 {
                ok = false;
                break;
            }
            let step = f / df;
            r -= step;
            if step.abs() <= 1e-16 * r.abs().max(1.0) {
                break;
            }
        }
        if !ok || (r - guess).abs() > wander || !r.is_finite() {
            continue;
        }
        let valid = (0..m).all(|j| poly_eval(&derivs[j], r).abs() <= root_tolerance(&derivs[j], r));
        if valid {
            // The cascade may certify even more vanishing derivatives than
            // requested (exact multiple roots polished from afar).
            return Some(RootWithMultiplicity {
                root: r,
                multiplicity: multiplicity_at(derivs, r).max(m),
            });
        }
    }
    None
}

/// Parlett–Reinsch balancing with radix-2 scaling (similarity transform, so
/// eigenvalues are unchanged while their conditioning improves).
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    let radix: f64 = 2.0;
    let sq = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut c_scaled = c;
                while c_scaled < g {
                    f *= radix;
                    c_scaled *= sq;
                }
                g = r * radix;
                while c_scaled > g {
                    f /= radix;
                    c_scaled /= sq;
                }
                if (c_scaled + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= ginv;
                    }
                    for j in 0..n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of an upper-Hessenberg matrix by the Francis double-shift QR
/// iteration (values only, no Schur vectors). The matrix is destroyed.
///
/// Port of the classic EISPACK `hqr` routine; indices follow the original
/// closely, shifted to 0-based.
fn hessenberg_qr_eigenvalues(a: &mut [Vec<f64>]) -> Result<Vec<(f64, f64)>, NumericsError> {
    let n = a.len();
    let mut eigen: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![(0.0, 0.0); n]);
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut its_total = 0usize;
    'deflate: while nn >= 0 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element. The threshold is
            // staged: blocks that resist deflation (tiny subdiagonal trapped
            // above a complex-pair 2x2 that the bulge chase never touches)
            // get progressively looser splits. The backward error this
            // introduces is bounded by the threshold and is repaired by the
            // Newton polish downstream.
            let stage = if its < 10 {
                64.0
            } else if its < 20 {
                1e6
            } else {
                1e10
            };
            let mut l = nn;
            while l >= 1 {
                let s =
                    a[(l - 1) as usize][(l - 1) as usize].abs() + a[l as usize][l as usize].abs();
                let s = if s == 0.0 { anorm } else { s };
                if a[l as usize][(l - 1) as usize].abs() <= stage * f64::EPSILON * s {
                    a[l as usize][(l - 1) as usize] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn as usize][nn as usize];
            if l == nn {
                // One root found.
                eigen.push((x + t, 0.0));
                nn -= 1;
                continue 'deflate;
            }
            let mut y = a[(nn - 1) as usize][(nn - 1) as usize];
            let mut w = a[nn as usize][(nn - 1) as usize] * a[(nn - 1) as usize][nn as usize];
            if l == nn - 1 {
                // Two roots found: real pair or complex conjugates.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x_shift = x + t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    eigen.push((x_shift + z, 0.0));
                    if z != 0.0 {
                        eigen.push((x_shift - w / z, 0.0));
                    } else {
                        eigen.push((x_shift, 0.0));
                    }
                } else {
                    eigen.push((x_shift + p, z));
                    eigen.push((x_shift + p, -z));
                }
                nn -= 2;
                continue 'deflate;
            }
            // No root yet: one more double QR sweep.
            its_total += 1;
            if its == 30 || its_total > 90 * n {
                return Err(NumericsError::NoConvergence(its_total));
            }
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 0..=(nn as usize) {
                    a[i][i] -= x;
                }
                let s = a[nn as usize][(nn - 1) as usize].abs()
                    + a[(nn - 1) as usize][(nn - 2) as usize].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Find two consecutive small subdiagonal elements; p, q, r carry
            // the shifted first column of (A - s1)(A - s2) into the sweep.
            let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
            let mut m = nn - 2;
            while m >= l {
                let z = a[m as usize][m as usize];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1) as usize][m as usize]
                    + a[m as usize][(m + 1) as usize];
                q = a[(m + 1) as usize][(m + 1) as usize] - z - rr - ss;
                r = a[(m + 2) as usize][(m + 1) as usize];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m as usize][(m - 1) as usize].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (a[(m - 1) as usize][(m - 1) as usize].abs()
                        + a[m as usize][m as usize].abs()
                        + a[(m + 1) as usize][(m + 1) as usize].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i as usize][(i - 2) as usize] = 0.0;
                if i != m + 2 {
                    a[i as usize][(i - 3) as usize] = 0.0;
                }
            }
            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k as usize][(k - 1) as usize];
                    q = a[(k + 1) as usize][(k - 1) as usize];
                    r = if k != nn - 1 {
                        a[(k + 2) as usize][(k - 1) as usize]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k as usize][(k - 1) as usize] = -a[k as usize][(k - 1) as usize];
                        }
                    } else {
                        a[k as usize][(k - 1) as usize] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in (k as usize)..=(nn as usize) {
                        let mut pp = a[k as usize][j] + q * a[(k + 1) as usize][j];
                        if k != nn - 1 {
                            pp += r * a[(k + 2) as usize][j];
                            a[(k + 2) as usize][j] -= pp * z;
                        }
                        a[(k + 1) as usize][j] -= pp * y;
                        a[k as usize][j] -= pp * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in (l as usize)..=(mmin as usize) {
                        let mut pp = x * a[i][k as usize] + y * a[i][(k + 1) as usize];
                        if k != nn - 1 {
                            pp += z * a[i][(k + 2) as usize];
                            a[i][(k + 2) as usize] -= pp * r;
                        }
                        a[i][(k + 1) as usize] -= pp * q;
                        a[i][k as usize] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(eigen)
}
