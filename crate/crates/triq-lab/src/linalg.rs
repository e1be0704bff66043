//! Minimal 2×2 complex linear algebra.
//!
//! Everything downstream works with single-qubit operators and slice
//! matrices, so a closed-form 2×2 toolkit (Hermitian eigenproblem, SVD,
//! ZYZ Euler extraction) is all that is needed.

use num_complex::Complex64;

/// 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn new(e: [[Complex64; 2]; 2]) -> Self {
        Mat2(e)
    }

    pub fn zero() -> Self {
        Mat2([[Complex64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// The bit-flip matrix [[0,1],[1,0]].
    pub fn swap() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Mat2([[o, l], [l, o]])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let o = Complex64::new(0.0, 0.0);
        Mat2([[a, o], [o, b]])
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += rhs.0[r][c];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] *= s;
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Squared Frobenius norm.
    pub fn frob_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// ‖U†U − 1‖_F, zero for a unitary matrix.
    pub fn unitarity_error(&self) -> f64 {
        let mut g = self.adjoint().mul(self);
        g.0[0][0] -= 1.0;
        g.0[1][1] -= 1.0;
        g.frob_sq().sqrt()
    }

    /// Eigen-decomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in descending order and the matching orthonormal
    /// eigenvectors as the columns of a unitary matrix.
    pub fn hermitian_eigen(&self) -> ([f64; 2], Mat2) {
        let p = self.0[0][0].re;
        let r = self.0[1][1].re;
        let q = self.0[0][1];
        let mean = 0.5 * (p + r);
        let gap = (0.25 * (p - r) * (p - r) + q.norm_sqr()).sqrt();
        let d = [mean + gap, mean - gap];

        if gap < 1e-300 || q.norm_sqr() + (p - r) * (p - r) < 1e-300 {
            return (d, Mat2::identity());
        }
        // Null vector of (H − d0): pick the better-conditioned construction.
        let cand_a = [q, Complex64::new(d[0] - p, 0.0)];
        let cand_b = [Complex64::new(d[0] - r, 0.0), q.conj()];
        let na = cand_a[0].norm_sqr() + cand_a[1].norm_sqr();
        let nb = cand_b[0].norm_sqr() + cand_b[1].norm_sqr();
        let w0 = if na >= nb { cand_a } else { cand_b };
        let n = (w0[0].norm_sqr() + w0[1].norm_sqr()).sqrt();
        if n < 1e-300 {
            return (d, Mat2::identity());
        }
        let w0 = [w0[0] / n, w0[1] / n];
        let w1 = [-w0[1].conj(), w0[0].conj()];
        (d, Mat2([[w0[0], w1[0]], [w0[1], w1[1]]]))
    }

    /// Singular value decomposition A = V · diag(σ) · W†, σ₀ ≥ σ₁ ≥ 0;
    /// V, W unitary.
    pub fn svd(&self) -> (Mat2, [f64; 2], Mat2) {
        let h = self.adjoint().mul(self);
        let (d, w) = h.hermitian_eigen();
        let mut sigma = [d[0].max(0.0).sqrt(), d[1].max(0.0).sqrt()];

        if sigma[0] < 1e-150 {
            return (Mat2::identity(), sigma, w);
        }
        // σ₀σ₁ = |det| exactly; the product form avoids the cancellation
        // noise of the small eigenvalue and is decisive for near-singular
        // inputs.
        sigma[1] = (self.det().norm() / sigma[0]).min(sigma[0]);
        let w0 = [w.0[0][0], w.0[1][0]];
        let v0 = mat_vec(self, &w0);
        let v0 = [v0[0] / sigma[0], v0[1] / sigma[0]];
        let v1 = if sigma[1] > sigma[0] * 1e-12 {
            let w1 = [w.0[0][1], w.0[1][1]];
            let t = mat_vec(self, &w1);
            [t[0] / sigma[1], t[1] / sigma[1]]
        } else {
            [-v0[1].conj(), v0[0].conj()]
        };
        (Mat2([[v0[0], v1[0]], [v0[1], v1[1]]]), sigma, w)
    }
}

#[inline]
fn mat_vec(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [
        m.0[0][0] * v[0] + m.0[0][1] * v[1],
        m.0[1][0] * v[0] + m.0[1][1] * v[1],
    ]
}

/// Coefficient of x in det(A + x·B).
///
/// det(A + x·B) = det A + x·det_mix(A,B) + x²·det B.
pub fn det_mix(a: &Mat2, b: &Mat2) -> Complex64 {
    a.0[0][0] * b.0[1][1] + b.0[0][0] * a.0[1][1] - a.0[0][1] * b.0[1][0] - b.0[0][1] * a.0[1][0]
}

/// ZYZ Euler angles (α, β, γ) with U ∝ Rz(α)·Ry(β)·Rz(γ) up to a global
/// phase. β ∈ [0, π].
pub fn zyz_angles(u: &Mat2) -> (f64, f64, f64) {
    let c = u.0[0][0].norm();
    let s = u.0[1][0].norm();
    let beta = 2.0 * s.atan2(c);
    const EPS: f64 = 1e-12;
    if s <= EPS {
        // Diagonal: only α+γ is defined.
        let sum = (u.0[1][1] * u.0[0][0].conj()).arg();
        return (sum, 0.0, 0.0);
    }
    if c <= EPS {
        // Anti-diagonal: only α−γ is defined.
        let dif = (u.0[1][0] * (-u.0[0][1]).conj()).arg();
        return (dif, std::f64::consts::PI, 0.0);
    }
    let sum = (u.0[1][1] * u.0[0][0].conj()).arg();
    let dif = (u.0[1][0] * (-u.0[0][1]).conj()).arg();
    let (alpha, gamma) = (0.5 * (sum + dif), 0.5 * (sum - dif));
    // sum and dif are only known mod 2π, which leaves a relative-sign
    // ambiguity between the diagonal and off-diagonal half-angle phases;
    // resolve it by checking which branch reproduces u up to global phase.
    let overlap = |a: f64, g: f64| {
        u.adjoint()
            .mul(&crate::state::euler_zyz(a, beta, g))
            .trace()
            .norm()
    };
    if overlap(alpha, gamma) >= overlap(alpha + std::f64::consts::PI, gamma - std::f64::consts::PI)
    {
        (alpha, beta, gamma)
    } else {
        (
            alpha + std::f64::consts::PI,
            beta,
            gamma - std::f64::consts::PI,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut impl Rng) -> Mat2 {
        let mut m = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                m.0[r][c] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        m
    }

    #[test]
    fn svd_reconstructs_and_factors_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_mat(&mut rng);
            let (v, s, w) = a.svd();
            assert!(v.unitarity_error() < 1e-12);
            assert!(w.unitarity_error() < 1e-12);
            assert!(s[0] >= s[1] && s[1] >= 0.0);
            let rebuilt = v
                .mul(&Mat2::diag(s[0].into(), s[1].into()))
                .mul(&w.adjoint());
            let mut diff = 0.0;
            for r in 0..2 {
                for c in 0..2 {
                    diff += (rebuilt.0[r][c] - a.0[r][c]).norm_sqr();
                }
            }
            assert!(diff.sqrt() < 1e-12, "svd residual {}", diff.sqrt());
        }
    }

    #[test]
    fn svd_of_singular_matrix_has_zero_sigma1() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            // Rank-one outer product.
            let a = [
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            ];
            let b = [
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            ];
            let m = Mat2([[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]]);
            let (_, s, _) = m.svd();
            assert!(s[1] < 1e-13);
        }
    }

    #[test]
    fn det_mix_expands_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_mat(&mut rng);
        let b = random_mat(&mut rng);
        let x = Complex64::new(0.37, -0.81);
        let lhs = a.add(&b.scale(x)).det();
        let rhs = a.det() + x * det_mix(&a, &b) + x * x * b.det();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn zyz_roundtrip_up_to_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let m = random_mat(&mut rng);
            // Unitarize via SVD: U = V·W†.
            let (v, _, w) = m.svd();
            let u = v.mul(&w.adjoint());
            let (al, be, ga) = zyz_angles(&u);
            let rebuilt = crate::state::euler_zyz(al, be, ga);
            // Compare up to global phase via |tr(U† R)| = 2.
            let t = u.adjoint().mul(&rebuilt).trace().norm();
            assert!((t - 2.0).abs() < 1e-10, "trace overlap {t}");
        }
    }
}
