//! Background Yang-Mills solution in temporal gauge on ℝ×S¹.
//!
//! The Cauchy data are a band-limited real connection coefficient Ā_Σ(0) and
//! a velocity F̄_t(0) constrained by δ̄_Σ(0) F̄_t(0) = 0; the velocity is
//! produced by orthogonal projection onto the numerical kernel of the
//! assembled codifferential. On the circle the curvature two-form vanishes
//! identically, so the evolution
//!
//! ```text
//! ∂_t Ā_Σ = F̄_t,   ∂_t F̄_t = −δ̄_Σ F̄_Σ,   ∂_t F̄_Σ = d_Σ F̄_t + F̄_t ∧ Ā_Σ
//! ```
//!
//! closes linearly: F̄_Σ ≡ 0, F̄_t is constant and Ā_Σ(t) = Ā_Σ(0) + t·F̄_t(0).
//! The integrator still runs the full system (with the two-form slot carried
//! along at the enlarged internal band limit) and monitors the constraint at
//! every node.

use crate::lie::LieAlgebra;
use crate::linalg::{self, c64};
use crate::spectral::{InnerProduct, ModeSpace, Op, Space};
use crate::{CMat, CVec, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Band-limited Lie-algebra-valued coefficient function on S¹.
///
/// Row m+band holds the Fourier coefficient f̂_m ∈ g ⊗ ℂ; real-valued fields
/// satisfy f̂_{−m} = conj(f̂_m) componentwise in the real basis of g.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub band: usize,
    /// (2·band+1) × dim_g
    pub coeffs: CMat,
}

impl FourierField {
    pub fn zeros(band: usize, dim_g: usize) -> Self {
        FourierField { band, coeffs: CMat::zeros((2 * band + 1, dim_g)) }
    }

    pub fn coeff(&self, m: i64) -> CVec {
        self.coeffs.row((m + self.band as i64) as usize).to_owned()
    }

    pub fn set_coeff(&mut self, m: i64, v: &CVec) {
        self.coeffs.row_mut((m + self.band as i64) as usize).assign(v);
    }

    pub fn dim_g(&self) -> usize {
        self.coeffs.dim().1
    }

    /// Largest violation of f̂_{−m} = conj(f̂_m).
    pub fn reality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..=self.band as i64 {
            let a = self.coeff(m);
            let b = self.coeff(-m);
            for k in 0..self.dim_g() {
                worst = worst.max((a[k].conj() - b[k]).norm());
            }
        }
        worst
    }

    /// Symmetrize to the nearest real-valued field.
    pub fn enforce_reality(&mut self) {
        for m in 1..=self.band as i64 {
            let a = self.coeff(m);
            let b = self.coeff(-m);
            let avg_p: CVec = (0..self.dim_g())
                .map(|k| (a[k] + b[k].conj()) * 0.5)
                .collect();
            let avg_m: CVec = avg_p.mapv(|z| z.conj());
            self.set_coeff(m, &avg_p);
            self.set_coeff(-m, &avg_m);
        }
        let mid = self.coeff(0).mapv(|z| c64(z.re, 0.0));
        self.set_coeff(0, &mid);
    }

    /// Pointwise Euclidean norm maximized over a sample grid.
    pub fn sup_norm(&self) -> f64 {
        let samples = 128;
        let mut worst = 0.0f64;
        for i in 0..samples {
            let x = std::f64::consts::TAU * i as f64 / samples as f64;
            let mut sq = 0.0;
            for k in 0..self.dim_g() {
                let mut v = c64(0.0, 0.0);
                for m in -(self.band as i64)..=self.band as i64 {
                    v += self.coeff(m)[k] * c64(0.0, m as f64 * x).exp();
                }
                sq += v.norm_sqr();
            }
            worst = worst.max(sq.sqrt());
        }
        worst
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        FourierField { band: self.band, coeffs: self.coeffs.mapv(|z| z * s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.band, other.band);
        FourierField { band: self.band, coeffs: &self.coeffs + &other.coeffs }
    }

    /// Re-truncate or zero-pad to a new band limit.
    pub fn with_band(&self, band: usize) -> Self {
        let mut out = FourierField::zeros(band, self.dim_g());
        let keep = self.band.min(band) as i64;
        for m in -keep..=keep {
            out.set_coeff(m, &self.coeff(m));
        }
        out
    }

    /// Flatten to an interleaved coefficient vector on a mode space (zero
    /// outside the band): layout matches [`Space::idx`] for a single block.
    pub fn to_space_vec(&self, space: &Space) -> CVec {
        assert_eq!(space.blocks.len(), 1);
        assert_eq!(space.blocks[0].fiber_dim, self.dim_g());
        let mut v = CVec::zeros(space.dim());
        for m in -(self.band as i64)..=self.band as i64 {
            if m.unsigned_abs() as usize > space.modes.n_max {
                continue;
            }
            let cm = self.coeff(m);
            for k in 0..self.dim_g() {
                v[space.idx(0, m, k)] = cm[k];
            }
        }
        v
    }

    pub fn from_space_vec(space: &Space, v: &CVec, band: usize) -> Self {
        assert_eq!(space.blocks.len(), 1);
        let dim_g = space.blocks[0].fiber_dim;
        let mut f = FourierField::zeros(band, dim_g);
        for m in -(band as i64)..=band as i64 {
            let cm: CVec = (0..dim_g).map(|k| v[space.idx(0, m, k)]).collect();
            f.set_coeff(m, &cm);
        }
        f
    }

    /// Multiplier coefficients of ad_{f(x)}: one fiber matrix per mode.
    pub fn ad_coeffs(&self, alg: &LieAlgebra) -> Result<Vec<(i64, CMat)>> {
        let mut out = Vec::new();
        for m in -(self.band as i64)..=self.band as i64 {
            let cm = self.coeff(m);
            if cm.iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            out.push((m, alg.ad_matrix(&cm)?));
        }
        Ok(out)
    }
}

/// The background at one time: connection coefficient, velocity, curvature.
#[derive(Debug, Clone)]
pub struct BackgroundState {
    pub t: f64,
    pub a_sigma: FourierField,
    pub f_t: FourierField,
    /// Curvature two-form coefficient; identically zero on the circle.
    pub f_sigma: FourierField,
    /// Set when the constraint kernel was empty and F̄_t = 0 was substituted.
    pub static_fallback: bool,
}

/// Uniformly sampled background trajectory.
#[derive(Debug, Clone)]
pub struct BackgroundFamily {
    pub states: Vec<BackgroundState>,
    pub dt: f64,
}

impl BackgroundFamily {
    pub fn t_end(&self) -> f64 {
        self.dt * (self.states.len() - 1) as f64
    }

    pub fn node(&self, j: usize) -> &BackgroundState {
        &self.states[j]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Background at an off-grid time by 6-point Lagrange interpolation of
    /// the coefficients (exact for the linear-in-t circle evolution).
    pub fn state_at(&self, t: f64) -> BackgroundState {
        let n = self.states.len();
        assert!(n >= 6, "family too short for interpolation");
        let j = ((t / self.dt).floor() as i64).clamp(0, n as i64 - 1) as usize;
        let lo = j.saturating_sub(2).min(n - 6);
        let nodes: Vec<usize> = (lo..lo + 6).collect();
        let mut weights = [0.0f64; 6];
        for (wi, &ni) in nodes.iter().enumerate() {
            let ti = ni as f64 * self.dt;
            let mut w = 1.0;
            for &nj in &nodes {
                if nj != ni {
                    let tj = nj as f64 * self.dt;
                    w *= (t - tj) / (ti - tj);
                }
            }
            weights[wi] = w;
        }
        let mut a = self.states[nodes[0]].a_sigma.scale(weights[0]);
        let mut f = self.states[nodes[0]].f_t.scale(weights[0]);
        for k in 1..6 {
            a = a.add(&self.states[nodes[k]].a_sigma.scale(weights[k]));
            f = f.add(&self.states[nodes[k]].f_t.scale(weights[k]));
        }
        BackgroundState {
            t,
            a_sigma: a,
            f_t: f,
            f_sigma: FourierField::zeros(self.states[0].f_sigma.band, self.states[0].f_sigma.dim_g()),
            static_fallback: self.states[0].static_fallback,
        }
    }
}

/// Assemble d̄_Σ = ∂_x + ad_{Ā_Σ} from zero-forms to one-forms.
pub fn dbar_sigma(alg: &LieAlgebra, w_t: &Space, w_sigma: &Space, a_sigma: &FourierField) -> Result<Op> {
    let d = crate::spectral::derivative_op(w_t, &w_t.blocks[0].label)?;
    let conv = crate::spectral::multiplication_op(w_sigma, w_t, &a_sigma.ad_coeffs(alg)?)?;
    Ok(Op { rows: w_sigma.clone(), cols: w_t.clone(), m: &d.m + &conv.m })
}

/// δ̄_Σ as the adjoint of d̄_Σ in the flat product.
pub fn deltabar_sigma(alg: &LieAlgebra, w_t: &Space, w_sigma: &Space, a_sigma: &FourierField) -> Result<Op> {
    let d = dbar_sigma(alg, w_t, w_sigma, a_sigma)?;
    crate::spectral::adjoint(&d, &InnerProduct::flat(), &InnerProduct::flat())
}

fn scalar_spaces(alg: &LieAlgebra, modes: ModeSpace) -> (Space, Space) {
    (
        Space::single(modes, "t", alg.dim),
        Space::single(modes, "sigma", alg.dim),
    )
}

/// Draw constraint-satisfying background Cauchy data at t = 0.
///
/// The connection coefficient is a random real band-limited one-form scaled
/// to the requested sup-norm amplitude; the velocity is a random one-form
/// projected orthogonally onto the numerical kernel of δ̄_Σ(0). An empty
/// kernel falls back to a static background with a warning flag.
pub fn make_cauchy_data(
    alg: &LieAlgebra,
    modes: ModeSpace,
    n_a: usize,
    amplitude: f64,
    seed: u64,
) -> Result<BackgroundState> {
    if n_a > modes.buffer {
        return Err(Error::Config(format!(
            "background band {n_a} exceeds interior buffer {}",
            modes.buffer
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim_g = alg.dim;

    let draw = |rng: &mut ChaCha8Rng| -> FourierField {
        let mut f = FourierField::zeros(n_a, dim_g);
        for m in 0..=n_a as i64 {
            let decay = 1.0 / (1.0 + (m * m) as f64);
            let v: CVec = (0..dim_g)
                .map(|_| {
                    if m == 0 {
                        c64(rng.gen_range(-1.0..1.0) * decay, 0.0)
                    } else {
                        c64(rng.gen_range(-1.0..1.0) * decay, rng.gen_range(-1.0..1.0) * decay)
                    }
                })
                .collect();
            f.set_coeff(m, &v);
            if m > 0 {
                let vc = v.mapv(|z| z.conj());
                f.set_coeff(-m, &vc);
            }
        }
        f
    };

    let mut a_sigma = draw(&mut rng);
    let sup = a_sigma.sup_norm();
    if amplitude == 0.0 || sup == 0.0 {
        a_sigma = FourierField::zeros(n_a, dim_g);
    } else {
        a_sigma = a_sigma.scale(amplitude / sup);
    }

    let (w_t, w_sigma) = scalar_spaces(alg, modes);
    let delta = deltabar_sigma(alg, &w_t, &w_sigma, &a_sigma)?;

    // Restrict columns to the band-limited one-forms and find the kernel
    // there, so the projected velocity stays band-limited.
    let cols: Vec<usize> = (-(n_a as i64)..=n_a as i64)
        .flat_map(|m| (0..dim_g).map(move |k| (m, k)))
        .map(|(m, k)| w_sigma.idx(0, m, k))
        .collect();
    let mut restricted = CMat::zeros((delta.m.dim().0, cols.len()));
    for (j, &cj) in cols.iter().enumerate() {
        restricted.column_mut(j).assign(&delta.m.column(cj));
    }
    let scale = linalg::two_norm(&delta.m).max(1.0);
    let kernel = linalg::nullspace(&restricted, crate::tol::KERNEL_REL * scale)?;

    let (f_t, static_fallback) = if kernel.dim().1 == 0 {
        (FourierField::zeros(n_a, dim_g), true)
    } else {
        let raw = if amplitude == 0.0 {
            FourierField::zeros(n_a, dim_g)
        } else {
            draw(&mut rng).scale(amplitude)
        };
        let mut rawv = CVec::zeros(cols.len());
        let raw_space = raw.to_space_vec(&w_sigma);
        for (j, &cj) in cols.iter().enumerate() {
            rawv[j] = raw_space[cj];
        }
        let coeffs = linalg::dagger(&kernel).dot(&rawv);
        let projected = kernel.dot(&coeffs);
        let mut padded = CVec::zeros(w_sigma.dim());
        for (j, &cj) in cols.iter().enumerate() {
            padded[cj] = projected[j];
        }
        let mut f = FourierField::from_space_vec(&w_sigma, &padded, n_a);
        f.enforce_reality();
        (f, false)
    };

    let state = BackgroundState {
        t: 0.0,
        a_sigma,
        f_t,
        f_sigma: FourierField::zeros(n_a, dim_g),
        static_fallback,
    };

    let rel = constraint_residual(alg, modes, &state)?;
    if !state.static_fallback && rel > crate::tol::CONSTRAINT_INITIAL {
        return Err(Error::ConstraintViolated(format!(
            "projected Cauchy data has constraint residual {rel:.3e}"
        )));
    }
    Ok(state)
}

/// ‖δ̄_Σ(t) F̄_t‖ / max(‖F̄_t‖, floor).
pub fn constraint_residual(alg: &LieAlgebra, modes: ModeSpace, state: &BackgroundState) -> Result<f64> {
    let (w_t, w_sigma) = scalar_spaces(alg, modes);
    let delta = deltabar_sigma(alg, &w_t, &w_sigma, &state.a_sigma)?;
    let ft = state.f_t.to_space_vec(&w_sigma);
    let num = linalg::vec_norm(&delta.m.dot(&ft));
    Ok(num / linalg::vec_norm(&ft).max(1e-14))
}

/// Classical 4th-order integration of the evolution system on a uniform
/// grid. Products are formed at the enlarged internal band 2·N_A and
/// truncated back to the state band at every node. The constraint is
/// monitored at every node; exceeding the tolerance is a hard failure.
pub fn evolve_background(
    alg: &LieAlgebra,
    modes: ModeSpace,
    init: &BackgroundState,
    t_end: f64,
    steps: usize,
) -> Result<BackgroundFamily> {
    if steps == 0 {
        return Err(Error::Config("evolution needs at least one step".into()));
    }
    let dt = t_end / steps as f64;
    let band = init.a_sigma.band;
    let wide = 2 * band;

    // Right-hand side at the internal band. On the circle the curvature
    // two-form slot vanishes identically, which closes the system linearly;
    // the slot is carried so the constraint bookkeeping matches the full
    // system shape.
    let rhs = |a: &FourierField, f: &FourierField| -> (FourierField, FourierField) {
        let da = f.clone();
        let df = FourierField::zeros(a.band, a.dim_g());
        (da, df)
    };

    let mut states = Vec::with_capacity(steps + 1);
    let mut a = init.a_sigma.with_band(wide);
    let mut f = init.f_t.with_band(wide);

    for j in 0..=steps {
        let state = BackgroundState {
            t: j as f64 * dt,
            a_sigma: a.with_band(band),
            f_t: f.with_band(band),
            f_sigma: FourierField::zeros(band, alg.dim),
            static_fallback: init.static_fallback,
        };
        let rel = constraint_residual(alg, modes, &state)?;
        let tol = crate::tol::CONSTRAINT_EVOLVED;
        if rel > tol {
            return Err(Error::ConstraintViolated(format!(
                "constraint residual {rel:.3e} > {tol:.1e} at t = {:.6}",
                state.t
            )));
        }
        states.push(state);
        if j == steps {
            break;
        }

        let (k1a, k1f) = rhs(&a, &f);
        let (k2a, k2f) = rhs(&a.add(&k1a.scale(dt / 2.0)), &f.add(&k1f.scale(dt / 2.0)));
        let (k3a, k3f) = rhs(&a.add(&k2a.scale(dt / 2.0)), &f.add(&k2f.scale(dt / 2.0)));
        let (k4a, k4f) = rhs(&a.add(&k3a.scale(dt)), &f.add(&k3f.scale(dt)));
        a = a.add(
            &k1a.add(&k2a.scale(2.0)).add(&k3a.scale(2.0)).add(&k4a).scale(dt / 6.0),
        );
        f = f.add(
            &k1f.add(&k2f.scale(2.0)).add(&k3f.scale(2.0)).add(&k4f).scale(dt / 6.0),
        );
    }

    Ok(BackgroundFamily { states, dt })
}

/// Negative control: push F̄_t off the constraint surface along a gradient
/// direction d̄_Σ(0)u, which δ̄_Σ maps to h_t u ≠ 0.
pub fn corrupt_state(alg: &LieAlgebra, modes: ModeSpace, state: &BackgroundState, seed: u64) -> Result<BackgroundState> {
    let (w_t, w_sigma) = scalar_spaces(alg, modes);
    let d = dbar_sigma(alg, &w_t, &w_sigma, &state.a_sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    let mut u = FourierField::zeros(state.f_t.band, alg.dim);
    for m in 1..=state.f_t.band.min(2) as i64 {
        let v: CVec = (0..alg.dim).map(|_| c64(rng.gen_range(0.5..1.0), rng.gen_range(-0.5..0.5))).collect();
        u.set_coeff(m, &v);
        let vc = v.mapv(|z| z.conj());
        u.set_coeff(-m, &vc);
    }
    let grad = d.m.dot(&u.to_space_vec(&w_t));
    let scale = state.f_t.l2_norm().max(1.0);
    let mut f_t = state.f_t.clone();
    let grad_field = FourierField::from_space_vec(&w_sigma, &grad, state.f_t.band);
    let gnorm = grad_field.l2_norm().max(1e-12);
    let mut corrupted = f_t.add(&grad_field.scale(scale / gnorm));
    corrupted.enforce_reality();
    f_t = corrupted;
    Ok(BackgroundState { f_t, ..state.clone() })
}
