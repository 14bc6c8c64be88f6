//! L∞ models of a few simply connected spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::homotopy::LInfAlgebra;
use crate::scalar::factorial;
use crate::space::{Element, GradedSpace};

/// A catalog entry with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Example {
    /// `S^n`, `n` odd and `≥ 3`.
    OddSphere(usize),
    /// `S^n`, `n` even and `≥ 2`.
    EvenSphere(usize),
    /// `ℂP^k`, `k ≥ 1`.
    Cpk(usize),
    /// `K(ℚ, n_1) × … × K(ℚ, n_r)`, every `n_i ≥ 2`.
    EmProduct(Vec<usize>),
}

impl Example {
    /// Parses `name` and its parameters, e.g. `("cpk", ["2"])` or
    /// `("em_product", ["2", "5"])`. Parameters may also be comma separated.
    pub fn parse(name: &str, params: &[&str]) -> Result<Self> {
        let mut nums = Vec::new();
        for p in params.iter().flat_map(|p| p.split(',')).filter(|p| !p.is_empty()) {
            nums.push(
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("bad parameter `{p}`")))?,
            );
        }
        let one = |nums: &[usize]| match nums {
            [n] => Ok(*n),
            _ => Err(Error::Invalid(format!("`{name}` takes one parameter"))),
        };
        let ex = match name {
            "odd_sphere" => Example::OddSphere(one(&nums)?),
            "even_sphere" => Example::EvenSphere(one(&nums)?),
            "cpk" => Example::Cpk(one(&nums)?),
            "em_product" => Example::EmProduct(nums),
            _ => return Err(Error::Invalid(format!("unknown example `{name}`"))),
        };
        ex.validate()?;
        Ok(ex)
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Example::OddSphere(n) => *n >= 3 && n % 2 == 1,
            Example::EvenSphere(n) => *n >= 2 && n % 2 == 0,
            Example::Cpk(k) => *k >= 1,
            Example::EmProduct(ns) => !ns.is_empty() && ns.iter().all(|&n| n >= 2),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{self} is not simply connected or not defined")))
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Example::OddSphere(n) => write!(f, "odd_sphere {n}"),
            Example::EvenSphere(n) => write!(f, "even_sphere {n}"),
            Example::Cpk(k) => write!(f, "cpk {k}"),
            Example::EmProduct(ns) => {
                let ns: Vec<String> = ns.iter().map(ToString::to_string).collect();
                write!(f, "em_product {}", ns.join(","))
            }
        }
    }
}

/// The L∞ model `π_*(ΩX) ⊗ ℚ` of a catalog entry.
pub fn example(ex: &Example) -> Result<LInfAlgebra> {
    ex.validate()?;
    Ok(match ex {
        Example::OddSphere(n) => {
            LInfAlgebra::new(GradedSpace::new([("x", *n as i64 - 1)])?)
        }
        Example::EvenSphere(n) => {
            let n = *n as i64;
            let mut l = LInfAlgebra::new(GradedSpace::new([("x", n - 1), ("y", 2 * n - 2)])?);
            l.set_named(&["x", "x"], Element::basis(1))?;
            l
        }
        Example::Cpk(k) => {
            let mut l = LInfAlgebra::new(GradedSpace::new([("x", 1), ("y", 2 * *k as i64)])?);
            let xs = vec!["x"; k + 1];
            l.set_named(&xs, Element::term(1, factorial(k + 1).recip()))?;
            l
        }
        Example::EmProduct(ns) => LInfAlgebra::new(GradedSpace::new(
            ns.iter()
                .enumerate()
                .map(|(i, &n)| (format!("x{}", i + 1), n as i64 - 1)),
        )?),
    })
}
