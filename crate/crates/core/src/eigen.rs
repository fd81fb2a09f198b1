//! Eigenvalues of real nonsymmetric matrices: balancing, Householder
//! reduction to Hessenberg form, then Francis double-shift QR with
//! exceptional shifts.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::linalg::Hessenberg;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 120;

fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix, destroying it.
fn hqr(a: &mut DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    let n = a.nrows();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut its = 0usize;
    while nn >= 0 {
        let nu = nn as usize;
        let mut l = nu;
        while l >= 1 {
            let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[(l, l - 1)].abs() + s == s {
                a[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        let mut x = a[(nu, nu)];
        if l == nu {
            wr[nu] = x + t;
            wi[nu] = 0.0;
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = a[(nu - 1, nu - 1)];
        let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
        if l == nu - 1 {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let mut z = q.abs().sqrt();
            x += t;
            if q >= 0.0 {
                z = p + sign(z, p);
                wr[nu - 1] = x + z;
                wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = -z;
                wi[nu] = z;
            }
            nn -= 2;
            its = 0;
            continue;
        }
        if its == MAX_ITERATIONS {
            return Err(Error::InvalidArgument("QR eigenvalue iteration did not converge".into()));
        }
        if its > 0 && its.is_multiple_of(10) {
            t += x;
            for i in 0..=nu {
                a[(i, i)] -= x;
            }
            let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;

        let (mut p, mut q, mut r): (f64, f64, f64);
        let mut m = nu - 2;
        loop {
            let z = a[(m, m)];
            let rr = x - z;
            let ss = y - z;
            p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
            q = a[(m + 1, m + 1)] - z - rr - ss;
            r = a[(m + 2, m + 1)];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
            let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
            if u + v == v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=nu {
            a[(i, i - 2)] = 0.0;
            if i != m + 2 {
                a[(i, i - 3)] = 0.0;
            }
        }
        let mut k = m;
        while k < nu {
            let mut xk = 0.0;
            if k != m {
                p = a[(k, k - 1)];
                q = a[(k + 1, k - 1)];
                r = if k != nu - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                xk = p.abs() + q.abs() + r.abs();
                if xk != 0.0 {
                    p /= xk;
                    q /= xk;
                    r /= xk;
                }
            }
            let s = sign((p * p + q * q + r * r).sqrt(), p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * xk;
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != nu - 1 {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * zz;
                    }
                    a[(k + 1, j)] -= pp * yy;
                    a[(k, j)] -= pp * xx;
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = xx * a[(i, k)] + yy * a[(i, k + 1)];
                    if k != nu - 1 {
                        pp += zz * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
            k += 1;
        }
    }
    Ok(wr.into_iter().zip(wi).collect())
}

/// Complex eigenvalues `(re, im)` of a real square matrix, in no particular order.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("eigenvalues need a square matrix".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![(m[(0, 0)], 0.0)]),
        _ => {}
    }
    let mut a = m.clone();
    balance(&mut a);
    let mut h = Hessenberg::new(a).h();
    hqr(&mut h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    #[test]
    fn companion_with_double_roots() {
        // z^4 + 2 z^2 + 1 = (z^2 + 1)^2
        let mut c = DMatrix::<f64>::zeros(4, 4);
        c[(1, 0)] = 1.0;
        c[(2, 1)] = 1.0;
        c[(3, 2)] = 1.0;
        c[(0, 3)] = -1.0;
        c[(2, 3)] = -2.0;
        let ev = eigenvalues(&c).unwrap();
        assert_eq!(ev.len(), 4);
        for (x, y) in ev {
            assert!(x.abs() < 1e-7 && (y.abs() - 1.0).abs() < 1e-7, "{x} {y}");
        }
    }

    #[test]
    fn triangular_and_rotation() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 5.0, 0.0, -1.0, 3.0, 0.0, 0.0, 4.0]);
        let ev = sorted(eigenvalues(&m).unwrap());
        let expect = [(-1.0, 0.0), (2.0, 0.0), (4.0, 0.0)];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a.0 - b.0).abs() < 1e-13 && a.1.abs() < 1e-13);
        }
        let r = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let ev = sorted(eigenvalues(&r).unwrap());
        assert!((ev[0].1 + 2.0).abs() < 1e-14 && (ev[1].1 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_determinant_agree() {
        let mut x = 12345u64;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in [3usize, 8, 17, 32] {
            let m = DMatrix::from_fn(n, n, |_, _| next());
            let ev = eigenvalues(&m).unwrap();
            let tr: f64 = ev.iter().map(|e| e.0).sum();
            assert!((tr - m.trace()).abs() < 1e-10 * n as f64);
            let det = ev.iter().fold((1.0f64, 0.0f64), |acc, e| {
                (acc.0 * e.0 - acc.1 * e.1, acc.0 * e.1 + acc.1 * e.0)
            });
            let lu_det = m.clone().lu().determinant();
            assert!((det.0 - lu_det).abs() < 1e-9 * lu_det.abs().max(1.0), "{det:?} {lu_det}");
            assert!(det.1.abs() < 1e-9 * lu_det.abs().max(1.0));
        }
    }
}
