//! Real Jordan form of diagonalisable matrices.
//!
//! `M = P J P⁻¹` with `J` block diagonal: first the 2×2 rotation-scaling
//! blocks `r·[[cos θ, −sin θ], [sin θ, cos θ]]` of the complex pairs
//! (ascending `r`), then the real eigenvalues (ascending `|λ|`).

use num_complex::Complex;

use crate::config::Tolerances;
use crate::linalg::{eigenvalues_with, inverse, DenseMatrix, LinalgError, Lu};
use crate::scalar::Scalar;

/// Complex-conjugate pair `r·e^{±iθ}`, θ in degrees within (0, 180).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexBlock<T> {
    pub r: T,
    pub theta: T,
}

/// Magnitude change applied to split a repeated eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation<T> {
    pub original: T,
    pub perturbed: T,
}

#[derive(Debug, Clone)]
pub struct RealJordanForm<T> {
    pub p: DenseMatrix<T>,
    pub p_inverse: DenseMatrix<T>,
    pub complex_blocks: Vec<ComplexBlock<T>>,
    pub real_eigs: Vec<T>,
    /// Magnitudes nudged apart because they coincided within tolerance.
    pub perturbations: Vec<Perturbation<T>>,
}

impl<T: Scalar> RealJordanForm<T> {
    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    /// The block-diagonal matrix `J`.
    pub fn jordan_matrix(&self) -> DenseMatrix<T> {
        self.power_of_j(1)
    }

    /// `Jᵏ`, computed blockwise as `rᵏ` and rotation by `k·θ`.
    pub fn power_of_j(&self, k: u64) -> DenseMatrix<T> {
        let n = self.dim();
        let mut j = DenseMatrix::zeros(n, n);
        let kf = T::from_u64(k).unwrap_or_else(T::infinity);
        for (b, blk) in self.complex_blocks.iter().enumerate() {
            let i = 2 * b;
            let rk = pow_u64(blk.r, k);
            let ang = (kf * blk.theta).to_radians();
            let (s, c) = ang.sin_cos();
            j[(i, i)] = rk * c;
            j[(i, i + 1)] = -rk * s;
            j[(i + 1, i)] = rk * s;
            j[(i + 1, i + 1)] = rk * c;
        }
        let off = 2 * self.complex_blocks.len();
        for (k2, &lam) in self.real_eigs.iter().enumerate() {
            j[(off + k2, off + k2)] = pow_u64(lam, k);
        }
        j
    }

    /// `P J P⁻¹`.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let pj = self.p.matmul(&self.jordan_matrix()).expect("square factors");
        pj.matmul(&self.p_inverse).expect("square factors")
    }
}

fn pow_u64<T: Scalar>(x: T, k: u64) -> T {
    match i32::try_from(k) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(T::from_u64(k).unwrap_or_else(T::infinity)),
    }
}

pub fn real_jordan<T: Scalar>(m: &DenseMatrix<T>) -> Result<RealJordanForm<T>, LinalgError> {
    real_jordan_with(m, &Tolerances::default())
}

/// One spectral entry: a real eigenvalue or the upper member of a pair.
#[derive(Clone, Copy)]
struct Entry<T> {
    value: Complex<T>,
    magnitude: T,
    is_complex: bool,
}

pub fn real_jordan_with<T: Scalar>(
    m: &DenseMatrix<T>,
    tol: &Tolerances,
) -> Result<RealJordanForm<T>, LinalgError> {
    let n = m.rows();
    let eigs = eigenvalues_with(m, tol)?;
    let mut entries: Vec<Entry<T>> = eigs
        .iter()
        .filter(|z| z.im >= T::zero())
        .map(|&z| Entry {
            value: z,
            magnitude: z.norm(),
            is_complex: z.im > T::zero(),
        })
        .collect();

    let vectors = eigenvectors(m, &entries, tol)?;
    let perturbations = separate_magnitudes(&mut entries, tol);

    // Build P: complex columns first (ascending r), then reals (ascending |λ|).
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&entries[a], &entries[b]);
        eb.is_complex
            .cmp(&ea.is_complex)
            .then(ea.magnitude.partial_cmp(&eb.magnitude).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.cmp(&b))
    });
    let mut p = DenseMatrix::zeros(n, n);
    let mut col = 0;
    for &e in &order {
        let z = &vectors[e];
        if entries[e].is_complex {
            for i in 0..n {
                p[(i, col)] = z[i].re;
                p[(i, col + 1)] = -z[i].im;
            }
            col += 2;
        } else {
            for i in 0..n {
                p[(i, col)] = z[i].re;
            }
            col += 1;
        }
    }
    debug_assert_eq!(col, n);

    let mut complex_blocks = Vec::new();
    let mut real_eigs = Vec::new();
    for &e in &order {
        let ent = &entries[e];
        if ent.is_complex {
            complex_blocks.push(ComplexBlock {
                r: ent.magnitude,
                theta: ent.value.im.atan2(ent.value.re).to_degrees(),
            });
        } else {
            let v = ent.value.re;
            real_eigs.push(if v < T::zero() { -ent.magnitude } else { ent.magnitude });
        }
    }

    let p_inverse = inverse(&p).map_err(|_| LinalgError::JordanFailure {
        residual: f64::INFINITY,
    })?;
    let form = RealJordanForm {
        p,
        p_inverse,
        complex_blocks,
        real_eigs,
        perturbations,
    };
    let residual = form.reconstruct().max_abs_diff_inf(m);
    let scale = T::one().max(m.norm_inf());
    if !(residual <= T::lit(tol.jordan_reconstruction) * scale) {
        return Err(LinalgError::JordanFailure {
            residual: residual.as_f64(),
        });
    }
    Ok(form)
}

impl<T: Scalar> DenseMatrix<T> {
    /// `‖self − other‖∞` (maximum absolute row sum of the difference).
    fn max_abs_diff_inf(&self, other: &Self) -> T {
        self.sub(other).map(|d| d.norm_inf()).unwrap_or_else(|_| T::infinity())
    }
}

/// Shrinks magnitudes that coincide with an earlier one so all are distinct.
///
/// Within a group of tied magnitudes the k-th member is scaled by
/// `1 − k·δ`. Zero eigenvalues contribute nothing for t ≥ 1 and are left
/// as they are.
fn separate_magnitudes<T: Scalar>(entries: &mut [Entry<T>], tol: &Tolerances) -> Vec<Perturbation<T>> {
    let repeat = T::lit(tol.eigen_repeat);
    let delta = T::lit(tol.eigen_perturbation);
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    idx.sort_by(|&a, &b| {
        entries[a]
            .magnitude
            .partial_cmp(&entries[b].magnitude)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut out = Vec::new();
    let mut g = 0;
    while g < idx.len() {
        let base = entries[idx[g]].magnitude;
        let mut end = g + 1;
        while end < idx.len() && entries[idx[end]].magnitude - base < repeat {
            end += 1;
        }
        if base > T::zero() {
            for (k, &e) in idx[g + 1..end].iter().enumerate() {
                let original = entries[e].magnitude;
                let kf = T::from_usize(k + 1).unwrap_or_else(T::one);
                let perturbed = original * (T::one() - kf * delta);
                entries[e].magnitude = perturbed;
                out.push(Perturbation { original, perturbed });
            }
        }
        g = end;
    }
    out
}

/// Eigenvectors by inverse iteration, one per entry.
///
/// Entries whose values nearly coincide share one shift and get an
/// orthonormal basis of the joint invariant subspace.
fn eigenvectors<T: Scalar>(
    m: &DenseMatrix<T>,
    entries: &[Entry<T>],
    tol: &Tolerances,
) -> Result<Vec<Vec<Complex<T>>>, LinalgError> {
    let n = m.rows();
    let norm = T::one().max(m.norm_inf());
    let floor = T::epsilon() * norm;
    let cluster_radius = T::lit(tol.eigen_repeat).max(T::lit(1e-6) * norm);

    let mut assigned = vec![false; entries.len()];
    let mut out: Vec<Vec<Complex<T>>> = vec![Vec::new(); entries.len()];
    for i in 0..entries.len() {
        if assigned[i] {
            continue;
        }
        let members: Vec<usize> = (i..entries.len())
            .filter(|&j| !assigned[j] && (entries[j].value - entries[i].value).norm() < cluster_radius)
            .collect();
        let shift = entries[i].value;
        let mut a: Vec<Complex<T>> = m.as_slice().iter().map(|&x| Complex::new(x, T::zero())).collect();
        for d in 0..n {
            a[d * n + d] = a[d * n + d] - shift;
        }
        let lu = Lu::<T, Complex<T>>::factor(n, a, Some(floor))?;
        let mut basis: Vec<Vec<Complex<T>>> = (0..members.len()).map(|k| start_vector(n, k)).collect();
        for _ in 0..3 {
            for v in basis.iter_mut() {
                *v = lu.solve(v);
                rescale(v);
            }
            orthonormalise(&mut basis);
        }
        for (v, &e) in basis.iter_mut().zip(&members) {
            normalise_phase(v);
            if !entries[e].is_complex {
                v.iter_mut().for_each(|z| z.im = T::zero());
            }
            out[e] = std::mem::take(v);
            assigned[e] = true;
        }
    }
    if out.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::JordanFailure {
            residual: f64::INFINITY,
        });
    }
    Ok(out)
}

fn start_vector<T: Scalar>(n: usize, k: usize) -> Vec<Complex<T>> {
    let golden = 0.618_033_988_749_895_f64;
    (0..n)
        .map(|i| {
            let x = ((i + 1) as f64 * golden * (k + 1) as f64 + 0.1 * k as f64).fract() + 0.25;
            Complex::new(T::lit(x), T::zero())
        })
        .collect()
}

fn rescale<T: Scalar>(v: &mut [Complex<T>]) {
    let big = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if big > T::zero() && big.is_finite() {
        v.iter_mut().for_each(|z| *z = *z / big);
    }
}

fn orthonormalise<T: Scalar>(basis: &mut [Vec<Complex<T>>]) {
    for k in 0..basis.len() {
        for j in 0..k {
            let (head, tail) = basis.split_at_mut(k);
            let q = &head[j];
            let v = &mut tail[0];
            let proj: Complex<T> = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x = *x - proj * y;
            }
        }
        let nrm = basis[k].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nrm > T::zero() {
            basis[k].iter_mut().for_each(|z| *z = *z / nrm);
        }
    }
}

/// Divides by the first component of (near-)maximal modulus so it becomes 1.
fn normalise_phase<T: Scalar>(v: &mut [Complex<T>]) {
    let big = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if big == T::zero() {
        return;
    }
    let cut = big * (T::one() - T::lit(1e-9));
    if let Some(&pivot) = v.iter().find(|z| z.norm() >= cut) {
        v.iter_mut().for_each(|z| *z = *z / pivot);
    }
}
