//! Conjunctions of delay conditions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::{AicParams, BdcParams, RicParams};
use super::{fdc_member, AlgebraError};
use crate::signal::Signal;
use crate::tick::TickInt;

/// One conjunct. Serialized as a JSON object tagged by `"kind"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(bound(serialize = "T: TickInt + Serialize", deserialize = "T: TickInt + Deserialize<'de>"))]
pub enum Atom<T> {
    Fdc { d: T },
    Bdc(BdcParams<T>),
    Aic(AicParams<T>),
    Ric(RicParams<T>),
}

impl<T: TickInt> Atom<T> {
    pub fn member(&self, u: &Signal<T>, x: &Signal<T>) -> Result<bool, AlgebraError> {
        match self {
            Atom::Fdc { d } => fdc_member(u, x, *d),
            Atom::Bdc(p) => p.member(u, x),
            Atom::Aic(a) => Ok(a.member(x)),
            Atom::Ric(r) => r.member(u, x),
        }
    }

    /// Largest time offset any window of this atom reaches.
    pub fn reach(&self) -> T {
        match self {
            Atom::Fdc { d } => *d,
            Atom::Bdc(p) => p.dr().max(p.df()),
            Atom::Aic(a) => a.delta_r().max(a.delta_f()),
            Atom::Ric(r) => r.delta_r().max(r.delta_f()),
        }
    }
}

impl<T: TickInt> fmt::Display for Atom<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Fdc { d } => write!(f, "FDC(d={d})"),
            Atom::Bdc(p) => write!(f, "BDC{p}"),
            Atom::Aic(a) => write!(f, "AIC{a}"),
            Atom::Ric(r) => write!(f, "RIC{r}"),
        }
    }
}

/// A non-empty conjunction of atoms; `x` is a solution for `u` when every
/// atom accepts the pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom<T>>", into = "Vec<Atom<T>>")]
#[serde(bound(serialize = "T: TickInt + Serialize", deserialize = "T: TickInt + Deserialize<'de>"))]
pub struct CondExpr<T> {
    atoms: Vec<Atom<T>>,
}

impl<T: TickInt> TryFrom<Vec<Atom<T>>> for CondExpr<T> {
    type Error = AlgebraError;

    fn try_from(atoms: Vec<Atom<T>>) -> Result<Self, AlgebraError> {
        CondExpr::new(atoms)
    }
}

impl<T> From<CondExpr<T>> for Vec<Atom<T>> {
    fn from(e: CondExpr<T>) -> Self {
        e.atoms
    }
}

impl<T: TickInt> CondExpr<T> {
    pub fn new(atoms: Vec<Atom<T>>) -> Result<Self, AlgebraError> {
        if atoms.is_empty() {
            return Err(AlgebraError::EmptyExpr);
        }
        for atom in &atoms {
            if let Atom::Fdc { d } = atom {
                if *d < T::zero() {
                    return Err(AlgebraError::NegativeDelay(d.to_string()));
                }
            }
        }
        Ok(CondExpr { atoms })
    }

    pub fn single(atom: Atom<T>) -> Result<Self, AlgebraError> {
        Self::new(vec![atom])
    }

    pub fn bdc(p: BdcParams<T>) -> Self {
        CondExpr {
            atoms: vec![Atom::Bdc(p)],
        }
    }

    /// Bounded delay conjoined with absolute inertia.
    pub fn baidc(p: BdcParams<T>, a: AicParams<T>) -> Self {
        CondExpr {
            atoms: vec![Atom::Bdc(p), Atom::Aic(a)],
        }
    }

    /// Bounded delay conjoined with relative inertia.
    pub fn bridc(p: BdcParams<T>, r: RicParams<T>) -> Self {
        CondExpr {
            atoms: vec![Atom::Bdc(p), Atom::Ric(r)],
        }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    /// Conjunction of two expressions.
    pub fn and(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().copied());
        CondExpr { atoms }
    }

    pub fn member(&self, u: &Signal<T>, x: &Signal<T>) -> Result<bool, AlgebraError> {
        for atom in &self.atoms {
            if !atom.member(u, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn reach(&self) -> T {
        self.atoms.iter().map(Atom::reach).fold(T::zero(), T::max)
    }
}

impl<T: TickInt> fmt::Display for CondExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"[{"kind":"bdc","mr":1,"dr":2,"mf":1,"df":2},{"kind":"aic","delta_r":1,"delta_f":1}]"#;
        let e: CondExpr<i64> = serde_json::from_str(text).unwrap();
        assert_eq!(
            e,
            CondExpr::baidc(BdcParams::new(1, 2, 1, 2).unwrap(), AicParams::new(1, 1).unwrap())
        );
        assert_eq!(serde_json::to_string(&e).unwrap(), text);
        assert!(serde_json::from_str::<CondExpr<i64>>("[]").is_err());
        assert!(serde_json::from_str::<CondExpr<i64>>(r#"[{"kind":"fdc","d":-1}]"#).is_err());
        assert!(serde_json::from_str::<CondExpr<i64>>(r#"[{"kind":"bdc","mr":3,"dr":2,"mf":1,"df":2}]"#).is_err());
    }

    #[test]
    fn conjunction_membership() {
        let u = Signal::new(false, vec![0i64, 3]).unwrap();
        let x = Signal::new(false, vec![2i64, 5]).unwrap();
        let p = BdcParams::new(1, 2, 1, 2).unwrap();
        let e = CondExpr::bridc(p, p.into());
        assert!(e.member(&u, &x).unwrap());
        let strict = e.and(&CondExpr::single(Atom::Aic(AicParams::new(3, 0).unwrap())).unwrap());
        assert!(!strict.member(&u, &x).unwrap());
        assert_eq!(strict.reach(), 3);
        assert_eq!(
            strict.to_string(),
            "BDC(mr=1, dr=2, mf=1, df=2) & RIC(mu_r=1, delta_r=2, mu_f=1, delta_f=2) & AIC(delta_r=3, delta_f=0)"
        );
    }
}
