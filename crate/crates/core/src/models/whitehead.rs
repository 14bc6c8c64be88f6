//! Certificates comparing higher brackets on `L` with antisymmetrized
//! higher products on its envelope.

use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::multiop::{Operations, Truncation};
use crate::perm::{all_permutations, chi, Permutation};
use crate::scalar::int;
use crate::space::Element;

/// One summand `χ(σ) · ε_σ mₙ(y_σ(1),…,y_σ(n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyTerm {
    pub sigma: Permutation,
    pub chi: i64,
    /// `±1` from the parity of `Σ_{j<n} (n−j)|x_σ(j)|`.
    pub epsilon: i64,
    /// The distinguished representative `ε_σ mₙ(y_σ)`.
    pub representative: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadCertificate {
    pub tuple: Vec<usize>,
    /// `±1` from the parity of `Σ_{j<n} (n−j)|x_j|`.
    pub epsilon: i64,
    /// `ε ℓₙ(x₁,…,xₙ)`, in `L`.
    pub bracket: Element,
    /// `h(ε ℓₙ(x))`, in `ΛL`.
    pub lhs: Element,
    pub terms: Vec<MasseyTerm>,
    /// `Σ_σ χ(σ) · ε ε_σ · (ε_σ mₙ(y_σ))`.
    pub rhs: Element,
    pub residual: Element,
    /// `h(ε ℓₙ(x)) − Σ_σ χ(σ) ε_σ mₙ(y_σ)`, the same comparison with the
    /// representatives taken without the sign `ε ε_σ`.
    pub literal_residual: Element,
}

impl WhiteheadCertificate {
    pub fn equal(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn literal_equal(&self) -> bool {
        self.literal_residual.is_zero()
    }
}

/// Certifies `h(ε ℓₙ(x₁,…,xₙ)) = Σ_σ χ(σ) ε ε_σ · ε_σ mₙ(y_σ(1),…,y_σ(n))`
/// with `h = ι` and `y = ι(x)`, for a tuple of basis indices of `L`.
///
/// For `n ≥ 4` the products `m_k`, `k ≤ n − 2`, must vanish within `t`.
pub fn whitehead_massey_certificate(
    e: &Envelope,
    tuple: &[usize],
    t: &Truncation,
) -> Result<WhiteheadCertificate> {
    let l = e.lie.space();
    let n = tuple.len();
    if n == 0 {
        return Err(Error::Invalid("empty tuple".into()));
    }
    if let Some(&bad) = tuple.iter().find(|&&x| x >= l.dim()) {
        return Err(Error::UnknownBasis(format!("#{bad}")));
    }
    let degrees: Vec<i64> = tuple.iter().map(|&x| l.degree(x)).collect();
    if degrees.iter().sum::<i64>() + n as i64 - 2 > t.max_degree || n > t.max_arity {
        return Err(Error::BoundOverflow {
            degree: degrees.iter().sum::<i64>() + n as i64 - 2,
            context: "certificate tuple".into(),
        });
    }
    if n >= 4 {
        for k in 1..=n - 2 {
            if e.structure.op_table(k).is_some_and(|m| !m.is_zero()) {
                return Err(Error::Hypothesis(format!("m_{k} ≠ 0")));
            }
        }
    }
    let parity = |ds: &[i64]| -> i64 { (0..n - 1).map(|j| (n - 1 - j) as i64 * ds[j]).sum() };
    let epsilon = if parity(&degrees).rem_euclid(2) == 0 { 1 } else { -1 };

    let bracket = e.lie.op_basis(n, tuple)?.scaled(&int(epsilon));
    let lhs = e.inclusion.apply(&bracket);

    let ys: Vec<Element> = tuple.iter().map(|&x| e.letter(x)).collect();
    let mut terms = Vec::new();
    let mut rhs = Element::zero();
    let mut literal = Element::zero();
    for sigma in all_permutations(n) {
        let c = chi(&sigma, &degrees)?;
        let permuted: Vec<&Element> = sigma.images().iter().map(|&i| &ys[i]).collect();
        let pd: Vec<i64> = sigma.images().iter().map(|&i| degrees[i]).collect();
        let eps_sigma = if parity(&pd).rem_euclid(2) == 0 { 1 } else { -1 };
        let representative = e.structure.op(n, &permuted)?.scaled(&int(eps_sigma));
        rhs.add_scaled(&representative, &int(c * epsilon * eps_sigma));
        literal.add_scaled(&representative, &int(c));
        terms.push(MasseyTerm {
            sigma,
            chi: c,
            epsilon: eps_sigma,
            representative,
        });
    }
    let mut residual = lhs.clone();
    residual.sub(&rhs);
    let mut literal_residual = lhs.clone();
    literal_residual.sub(&literal);
    Ok(WhiteheadCertificate {
        tuple: tuple.to_vec(),
        epsilon,
        bracket,
        lhs,
        terms,
        rhs,
        residual,
        literal_residual,
    })
}
