//! Eigenvalues of dense real matrices.
//!
//! The matrix is balanced, reduced to upper Hessenberg form with Householder
//! reflections and then driven to quasi-triangular form with the implicit
//! Francis double-shift QR iteration. Eigenvalues are read off the 1×1 and
//! 2×2 diagonal blocks.

use num_complex::Complex;

use crate::config::Tolerances;
use crate::linalg::{DenseMatrix, LinalgError};
use crate::scalar::Scalar;

/// All eigenvalues of a square matrix, complex pairs adjacent with the
/// positive imaginary part first.
pub fn eigenvalues<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<Complex<T>>, LinalgError> {
    eigenvalues_with(m, &Tolerances::default())
}

pub fn eigenvalues_with<T: Scalar>(
    m: &DenseMatrix<T>,
    tol: &Tolerances,
) -> Result<Vec<Complex<T>>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a: Vec<T> = m.as_slice().to_vec();
    balance(n, &mut a);
    hessenberg(n, &mut a);
    hqr(n, &mut a, tol.qr_sweeps_per_dim * n)
}

/// Largest eigenvalue magnitude.
pub fn spectral_radius<T: Scalar>(m: &DenseMatrix<T>) -> Result<T, LinalgError> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max))
}

/// Diagonal similarity scaling that equalises row and column norms.
fn balance<T: Scalar>(n: usize, a: &mut [T]) {
    let radix = T::lit(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    let mut passes = 0;
    while !done && passes < 100 {
        done = true;
        passes += 1;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + a[j * n + i].abs();
                    r = r + a[i * n + j].abs();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let mut g = r / radix;
            let mut f = T::one();
            let s = c + r;
            while c < g {
                f = f * radix;
                c = c * sqrdx;
            }
            g = r * radix;
            while c > g {
                f = f / radix;
                c = c / sqrdx;
            }
            if (c + r) / f < T::lit(0.95) * s {
                done = false;
                let g = T::one() / f;
                for j in 0..n {
                    a[i * n + j] = a[i * n + j] * g;
                }
                for j in 0..n {
                    a[j * n + i] = a[j * n + i] * f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg<T: Scalar>(n: usize, a: &mut [T]) {
    if n < 3 {
        return;
    }
    let mut v = vec![T::zero(); n];
    for k in 0..n - 2 {
        let alpha_norm = ((k + 1)..n)
            .map(|i| a[i * n + k] * a[i * n + k])
            .sum::<T>()
            .sqrt();
        if alpha_norm == T::zero() {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 >= T::zero() { -alpha_norm } else { alpha_norm };
        v.iter_mut().for_each(|x| *x = T::zero());
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = a[i * n + k];
        }
        let vnorm2: T = ((k + 1)..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        let two_over = T::lit(2.0) / vnorm2;
        // A ← (I − 2vvᵀ/vᵀv) A
        for j in 0..n {
            let s: T = ((k + 1)..n).map(|i| v[i] * a[i * n + j]).sum();
            let s = s * two_over;
            for i in (k + 1)..n {
                a[i * n + j] = a[i * n + j] - s * v[i];
            }
        }
        // A ← A (I − 2vvᵀ/vᵀv)
        for i in 0..n {
            let s: T = ((k + 1)..n).map(|j| a[i * n + j] * v[j]).sum();
            let s = s * two_over;
            for j in (k + 1)..n {
                a[i * n + j] = a[i * n + j] - s * v[j];
            }
        }
        for i in (k + 2)..n {
            a[i * n + k] = T::zero();
        }
    }
}

#[inline]
fn sign<T: Scalar>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr<T: Scalar>(n: usize, a: &mut [T], max_sweeps: usize) -> Result<Vec<Complex<T>>, LinalgError> {
    let idx = |i: usize, j: usize| i * n + j;
    let eps = T::epsilon();
    let mut wr = vec![T::zero(); n];
    let mut wi = vec![T::zero(); n];
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm = anorm + a[idx(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = T::zero();
    let mut sweeps = 0usize;
    while nn >= 0 {
        let mut its = 0usize;
        let mut l: isize;
        loop {
            // Look for a single small subdiagonal element.
            l = nn;
            while l > 0 {
                let lu = l as usize;
                let mut s = a[idx(lu - 1, lu - 1)].abs() + a[idx(lu, lu)].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[idx(lu, lu - 1)].abs() <= eps * s {
                    a[idx(lu, lu - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            let mut x = a[idx(nu, nu)];
            if l == nn {
                wr[nu] = x + t;
                wi[nu] = T::zero();
                nn -= 1;
            } else {
                let mut y = a[idx(nu - 1, nu - 1)];
                let mut w = a[idx(nu, nu - 1)] * a[idx(nu - 1, nu)];
                if l == nn - 1 {
                    let p = T::lit(0.5) * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x = x + t;
                    if q >= T::zero() {
                        z = p + sign(z, p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != T::zero() {
                            wr[nu] = x - w / z;
                        }
                        wi[nu - 1] = T::zero();
                        wi[nu] = T::zero();
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = z;
                        wi[nu] = -z;
                    }
                    nn -= 2;
                } else {
                    if sweeps >= max_sweeps {
                        return Err(LinalgError::NoConvergence { sweeps });
                    }
                    if its > 0 && its.is_multiple_of(10) {
                        // Exceptional shift.
                        t = t + x;
                        for i in 0..=nu {
                            a[idx(i, i)] = a[idx(i, i)] - x;
                        }
                        let s = a[idx(nu, nu - 1)].abs() + a[idx(nu - 1, nu - 2)].abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        w = T::lit(-0.4375) * s * s;
                    }
                    its += 1;
                    sweeps += 1;
                    let lu = l as usize;
                    let mut m = nu - 2;
                    let (mut p, mut q, mut r);
                    loop {
                        let z = a[idx(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                        q = a[idx(m + 1, m + 1)] - z - rr - ss;
                        r = a[idx(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == lu {
                            break;
                        }
                        let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs()
                            * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..(nu - 1) {
                        a[idx(i + 2, i)] = T::zero();
                        if i != m {
                            a[idx(i + 2, i - 1)] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = a[idx(k, k - 1)];
                            q = a[idx(k + 1, k - 1)];
                            r = T::zero();
                            if k + 1 != nu {
                                r = a[idx(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l as usize != m {
                                    a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                                }
                            } else {
                                a[idx(k, k - 1)] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nu {
                                let mut pp = a[idx(k, j)] + q * a[idx(k + 1, j)];
                                if k + 1 != nu {
                                    pp = pp + r * a[idx(k + 2, j)];
                                    a[idx(k + 2, j)] = a[idx(k + 2, j)] - pp * z;
                                }
                                a[idx(k + 1, j)] = a[idx(k + 1, j)] - pp * y;
                                a[idx(k, j)] = a[idx(k, j)] - pp * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in lu..=mmin {
                                let mut pp = x * a[idx(i, k)] + y * a[idx(i, k + 1)];
                                if k + 1 != nu {
                                    pp = pp + z * a[idx(i, k + 2)];
                                    a[idx(i, k + 2)] = a[idx(i, k + 2)] - pp * r;
                                }
                                a[idx(i, k + 1)] = a[idx(i, k + 1)] - pp * q;
                                a[idx(i, k)] = a[idx(i, k)] - pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    let mut out: Vec<Complex<T>> = wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex::new(re, im))
        .collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NoConvergence { sweeps });
    }
    // Keep conjugate pairs adjacent, positive imaginary part first.
    let mut i = 0;
    while i + 1 < out.len() {
        if out[i].im != T::zero() && out[i + 1].im != T::zero() {
            if out[i].im < T::zero() {
                out.swap(i, i + 1);
            }
            i += 2;
        } else {
            i += 1;
        }
    }
    Ok(out)
}
