//! Centralized tolerances for the identity batteries and the acceptance
//! suite.
//!
//! Every threshold used by a verification is defined here, grouped by what
//! limits the achievable accuracy:
//!
//! | group | limited by | scale |
//! |-------|------------|-------|
//! | exact algebra | f64 rounding in O(dim) compositions | 1e-14 .. 1e-10 |
//! | spectral solvers | LAPACK eigen/SVD backward error | 1e-12 .. 1e-10 |
//! | grid calculus | 4th-order stencils, dt⁴ | 1e-8 |
//! | ODE integration | RK4 at substep dt/4 | 1e-8 .. 1e-6 |
//! | iterative construction | recorded residual floors | run-dependent |

/// Entrywise checks on hand-built small matrices (structure constants,
/// ad-invariance of the product).
pub const LIE_ENTRYWISE: f64 = 1e-14;

/// Jacobi identity residual over all basis triples.
pub const LIE_JACOBI: f64 = 1e-13;

/// Involutions and adjoints computed by dense congruence.
pub const ADJOINT_INVOLUTION: f64 = 1e-14;

/// Composition-reversal of the adjoint on random pairs.
pub const ADJOINT_COMPOSITION: f64 = 1e-12;

/// Functional calculus homomorphism on commuting arguments.
pub const FUNCALC_HOM: f64 = 1e-10;

/// Hermiticity residual above which `funcalc` refuses its input.
pub const FUNCALC_HERMITICITY: f64 = 1e-10;

/// Eigenvalue clusters closer than this are treated as degenerate.
pub const FUNCALC_CLUSTER: f64 = 1e-12;

/// Constraint residual of freshly projected background Cauchy data.
pub const CONSTRAINT_INITIAL: f64 = 1e-10;

/// Constraint residual along the evolved background family.
pub const CONSTRAINT_EVOLVED: f64 = 1e-8;

/// Deliberately corrupted data must exceed this (negative control).
pub const CONSTRAINT_NEGATIVE_CONTROL: f64 = 0.1;

/// Closed-form linear-in-t background on the circle.
pub const BACKGROUND_D1_EXACT: f64 = 1e-12;

/// Evolve-forward / evolve-back round trip.
pub const BACKGROUND_REVERSAL: f64 = 1e-8;

/// Self-adjointness a(t)*J = J a(t) at every node.
pub const WAVE_J_SELFADJOINT: f64 = 1e-10;

/// Intertwining of the vector and scalar families on interior sections.
pub const WAVE_INTERTWINING: f64 = 1e-8;

/// Charge conservation along the Cauchy evolution.
pub const WAVE_CHARGE_CONSERVATION: f64 = 1e-8;

/// Flat-static closed form vs the integrator.
pub const WAVE_FLAT_ORACLE: f64 = 1e-7;

/// Commutation identity of h_Σ and h_t with the covariant differential
/// (interior modes).
pub const WAVE_H_INTERTWINE: f64 = 1e-11;

/// Codifferential/curvature identity δ̄_Σ∘a = a*∘d̄_Σ (interior modes).
pub const WAVE_EN4: f64 = 1e-11;

/// Closed-form K_Σ vs the evolution-based computation.
pub const KSIGMA_CROSS: f64 = 1e-6;

/// K_Σ† K_Σ = 0 (exact algebra).
pub const KSIGMA_NILPOTENT: f64 = 1e-12;

/// Symplecticity of the Cauchy-data transformations R_F, S, R̃_F.
pub const SYMPLECTIC: f64 = 1e-12;

/// Congruence b_R J + J b_R* = Z*JZ.
pub const DIAG_CONGRUENCE: f64 = 1e-10;

/// T·T⁻¹ = 1 and the q-diagonalization (T⁻¹)*qT⁻¹ = diag(J,−J).
pub const DIAG_T: f64 = 1e-11;

/// Idempotency/complementarity of the charge projections.
pub const DIAG_PROJECTION: f64 = 1e-11;

/// Agreement of the two constructions of c±.
pub const DIAG_C_CROSS: f64 = 1e-10;

/// Hermiticity of the two-point forms.
pub const TWOPOINT_HERMITICITY: f64 = 1e-12;

/// Block identities λ± = T*diag(J,0)T, T*diag(0,J)T.
pub const TWOPOINT_BLOCK: f64 = 1e-10;

/// q-orthogonality of Ran c⁺ and Ran c⁻.
pub const DIAG_Q_ORTHOGONAL: f64 = 1e-9;

/// Projection identities of the reference pair (Π₀, B₀).
pub const GAUGE_PI0: f64 = 1e-11;

/// B₀K_Σ = 1 (exact algebra).
pub const GAUGE_B0_LEFT: f64 = 1e-12;

/// Distance of sampled Ker Π₀ vectors to Ran K_Σ.
pub const GAUGE_KERNEL_RANGE: f64 = 1e-8;

/// Corrected projection identities (Π² = Π, cross-check of the two Π
/// formulas, K_ΣB = 1−Π, BK_Σ = 1).
pub const GAUGE_PI: f64 = 1e-10;

/// Membership test for the corrected range (adapted-coordinate conditions).
pub const GAUGE_MEMBERSHIP: f64 = 1e-7;

/// Audit of the least-squares solve against δ̃_Σ, relative to the datum.
pub const GAUGE_LSTSQ_AUDIT: f64 = 1e-8;

/// c̃⁺+c̃⁻ = 1 and the decomposition c± = c̃± + c_reg±.
pub const GAUGE_CTILDE: f64 = 1e-10;

/// Invariance of Ker K_Σ† under c̃± and the strengthened gauge invariance
/// c̃⁺K_Σ = K_Σc₀⁺.
pub const GAUGE_INVARIANCE: f64 = 1e-9;

/// Nullity of λ̃± on gauge directions.
pub const GAUGE_NULL_DIRECTIONS: f64 = 1e-9;

/// Relative positivity floor for λ̃± restricted to Ker K_Σ†.
pub const POSITIVITY_FLOOR: f64 = 1e-8;

/// Relative positivity floor for λ± on the weighted Σ-block subspace.
pub const POSITIVITY_FLOOR_SIGMA: f64 = 1e-9;

/// Witness expectation in the vector case after normalization.
pub const NONEXISTENCE_WITNESS: f64 = -0.5;

/// min eig(λ⁺+λ⁻) in the scalar case.
pub const SCALAR_POSITIVITY: f64 = -1e-10;

/// Flat-vacuum mode-wise oracle for λ⁺ and c⁺.
pub const FLAT_VACUUM_ORACLE: f64 = 1e-8;

/// Single-signed spectral mass fraction per interior mode.
pub const FREQUENCY_SIGN_MASS: f64 = 0.999;

/// Default rank cutoff, relative to the matrix scale.
pub const RANK_REL: f64 = 1e-8;

/// Kernel extraction threshold for h_t, relative to ‖h_t‖.
pub const KERNEL_REL: f64 = 1e-8;

/// Factor by which order_norm(r, 0) must shrink per fixed-point sweep.
pub const RESIDUAL_GAIN: f64 = 2.0;

/// Interior decay exponent of the gauge defect at four sweeps.
pub const RINF_DECAY_EXPONENT: f64 = 3.0;

/// order_norm(c_reg±, s) ≤ this multiple of order_norm(R_reg, s).
pub const CREG_VS_RINF: f64 = 10.0;

/// Parametrix defect and cutoff-robustness bounds, as a multiple of the
/// recorded factorization residual floor.
pub const FLOOR_MULTIPLE: f64 = 10.0;
