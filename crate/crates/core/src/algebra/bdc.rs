//! Bounded delay conditions: membership, canonical solutions, and the
//! algebra of parameter tuples (intersection, union envelope, inclusion,
//! serial composition, determinism, symmetry).
//!
//! `x` is a solution for input `u` when
//!
//! ```text
//! AND u on [t-dr, t-dr+mr]  <=  x(t)  <=  OR u on [t-df, t-df+mf]    for all t
//! ```
//!
//! The tuple is *consistent* (every input has a solution) exactly when the
//! two windows always overlap: `dr >= df - mf` and `df >= dr - mr`.

use super::params::BdcParams;
use super::AlgebraError;
use crate::signal::Signal;
use crate::tick::{self, TickInt};

impl<T: TickInt> BdcParams<T> {
    /// The consistency condition: `dr >= df - mf` and `df >= dr - mr`.
    pub fn cc_holds(&self) -> bool {
        self.dr() >= self.rise_lower() && self.df() >= self.fall_lower()
    }

    pub(crate) fn require_cc(&self) -> Result<(), AlgebraError> {
        if self.cc_holds() {
            Ok(())
        } else {
            Err(AlgebraError::Inconsistent(self.to_string()))
        }
    }

    /// The lower envelope `AND u on [t-dr, t-dr+mr]`, with no consistency check.
    pub fn lower_bound(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        Ok(u.window_and(self.dr(), self.mr())?)
    }

    /// The upper envelope `OR u on [t-df, t-df+mf]`, with no consistency check.
    pub fn upper_bound(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        Ok(u.window_or(self.df(), self.mf())?)
    }

    /// Membership does not require consistency.
    pub fn member(&self, u: &Signal<T>, x: &Signal<T>) -> Result<bool, AlgebraError> {
        Ok(self.lower_bound(u)?.leq(x) && x.leq(&self.upper_bound(u)?))
    }

    /// Least solution for `u`.
    pub fn min_solution(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        self.require_cc()?;
        self.lower_bound(u)
    }

    /// Greatest solution for `u`.
    pub fn max_solution(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        self.require_cc()?;
        self.upper_bound(u)
    }

    /// Parameters whose solution set is the intersection of both, or `None`
    /// when no single consistent tuple describes it.
    ///
    /// Upper bounds take the minimum, memories are shrunk so that the lower
    /// bounds take the maximum.
    pub fn intersection(&self, other: &Self) -> Result<Option<Self>, AlgebraError> {
        self.require_cc()?;
        other.require_cc()?;
        let dr = self.dr().min(other.dr());
        let df = self.df().min(other.df());
        let mr = dr - self.fall_lower().max(other.fall_lower());
        let mf = df - self.rise_lower().max(other.rise_lower());
        if mr < T::zero() || mf < T::zero() {
            return Ok(None);
        }
        let p = BdcParams::new(mr, dr, mf, df)?;
        Ok(p.cc_holds().then_some(p))
    }

    /// The smallest tuple whose solution set contains the union of both.
    pub fn union_envelope(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.require_cc()?;
        other.require_cc()?;
        let dr = self.dr().max(other.dr());
        let df = self.df().max(other.df());
        let mr = dr - self.fall_lower().min(other.fall_lower());
        let mf = df - self.rise_lower().min(other.rise_lower());
        Ok(BdcParams::new(mr, dr, mf, df)?)
    }

    /// A consistent tuple has singleton solution sets exactly when both
    /// memories are zero.
    pub fn is_deterministic(&self) -> Result<bool, AlgebraError> {
        self.require_cc()?;
        Ok(self.mr() == T::zero() && self.mf() == T::zero())
    }

    /// Any tuple that is not a pure translation is inertial.
    pub fn is_inertial(&self) -> Result<bool, AlgebraError> {
        Ok(!self.is_deterministic()?)
    }

    /// The shift `d` when the condition degenerates to `x(t) = u(t - d)`.
    pub fn as_translation(&self) -> Result<Option<T>, AlgebraError> {
        // CC with zero memories forces dr == df.
        Ok(self.is_deterministic()?.then_some(self.dr()))
    }

    /// Whether every solution under `self` is a solution under `other`, for
    /// every input.
    pub fn includes(&self, other: &Self) -> Result<bool, AlgebraError> {
        self.require_cc()?;
        other.require_cc()?;
        Ok(other.fall_lower() <= self.fall_lower()
            && self.fall_lower() <= self.df()
            && self.df() <= other.df()
            && other.rise_lower() <= self.rise_lower()
            && self.rise_lower() <= self.dr()
            && self.dr() <= other.dr())
    }

    pub fn is_symmetrical(&self) -> bool {
        self.dr() == self.df() && self.mr() == self.mf()
    }

    /// Serial connection: `self` first, then `next`. Parameters add.
    pub fn compose(&self, next: &Self) -> Result<Self, AlgebraError> {
        self.require_cc()?;
        next.require_cc()?;
        Ok(BdcParams::new(
            tick::add(self.mr(), next.mr())?,
            tick::add(self.dr(), next.dr())?,
            tick::add(self.mf(), next.mf())?,
            tick::add(self.df(), next.df())?,
        )?)
    }
}

/// Pure delay: `x(t) = u(t - d)`.
pub fn fdc_member<T: TickInt>(u: &Signal<T>, x: &Signal<T>, d: T) -> Result<bool, AlgebraError> {
    if d < T::zero() {
        return Err(AlgebraError::NegativeDelay(d.to_string()));
    }
    Ok(u.translate(d)? == *x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mr: i64, dr: i64, mf: i64, df: i64) -> BdcParams<i64> {
        BdcParams::new(mr, dr, mf, df).unwrap()
    }

    fn sig(initial: u8, switches: &[i64]) -> Signal<i64> {
        Signal::new(initial == 1, switches.to_vec()).unwrap()
    }

    #[test]
    fn union_envelope_strict_with_consistent_intersection() {
        let (a, b) = (p(0, 1, 1, 2), p(1, 2, 0, 1));
        assert!(a.intersection(&b).unwrap().is_some());
        let env = a.union_envelope(&b).unwrap();
        assert_eq!(env, p(1, 2, 1, 2));
        let u = sig(1, &[1, 2, 4, 8]);
        let x = sig(1, &[2, 4, 6, 10]);
        assert!(env.member(&u, &x).unwrap());
        assert!(!a.member(&u, &x).unwrap() && !b.member(&u, &x).unwrap());
    }

    #[test]
    fn intersection_params_can_lose_solutions() {
        let (a, b) = (p(1, 3, 0, 2), p(2, 2, 0, 2));
        let both = a.intersection(&b).unwrap().unwrap();
        assert_eq!(both, p(0, 2, 0, 2));
        let u = sig(0, &[0, 1]);
        let zero = sig(0, &[]);
        assert!(a.member(&u, &zero).unwrap() && b.member(&u, &zero).unwrap());
        assert!(!both.member(&u, &zero).unwrap());
    }

    #[test]
    fn consistency_condition() {
        assert!(p(0, 2, 0, 2).cc_holds());
        assert!(!p(0, 3, 0, 2).cc_holds());
        assert!(p(1, 2, 1, 2).cc_holds());
        assert!(matches!(
            p(0, 3, 0, 2).min_solution(&sig(0, &[0])),
            Err(AlgebraError::Inconsistent(_))
        ));
    }

    #[test]
    fn membership() {
        let u = sig(0, &[0, 5]);
        assert!(p(1, 3, 1, 3).member(&u, &u.translate(3).unwrap()).unwrap());
        assert!(!p(0, 2, 0, 2).member(&u, &u).unwrap());
        let zero = Signal::constant(false);
        assert!(p(2, 4, 1, 3).member(&zero, &zero).unwrap());
        // Membership is defined even without consistency.
        assert!(p(0, 3, 0, 2).member(&zero, &zero).unwrap());
    }

    #[test]
    fn canonical_solutions() {
        let u = sig(0, &[0, 5]);
        let q = p(1, 3, 1, 3);
        assert_eq!(q.min_solution(&u).unwrap(), sig(0, &[3, 7]));
        assert_eq!(q.max_solution(&u).unwrap(), sig(0, &[2, 8]));
        let det = p(0, 4, 0, 4);
        assert_eq!(det.min_solution(&u).unwrap(), u.translate(4).unwrap());
        assert_eq!(det.max_solution(&u).unwrap(), u.translate(4).unwrap());
        let c = Signal::constant(true);
        assert_eq!(q.min_solution(&c).unwrap(), c);
        assert_eq!(q.max_solution(&c).unwrap(), c);
    }

    #[test]
    fn intersection_and_union() {
        assert_eq!(p(1, 2, 1, 2).intersection(&p(2, 3, 2, 3)).unwrap(), Some(p(1, 2, 1, 2)));
        assert_eq!(p(0, 1, 0, 1).intersection(&p(0, 3, 0, 3)).unwrap(), None);
        assert_eq!(p(1, 3, 2, 4).intersection(&p(1, 3, 2, 4)).unwrap(), Some(p(1, 3, 2, 4)));
        assert_eq!(p(1, 2, 1, 2).union_envelope(&p(2, 3, 2, 3)).unwrap(), p(2, 3, 2, 3));
        assert_eq!(p(1, 3, 2, 4).union_envelope(&p(1, 3, 2, 4)).unwrap(), p(1, 3, 2, 4));
        let env = p(0, 1, 0, 1).union_envelope(&p(0, 3, 0, 3)).unwrap();
        assert_eq!(env, p(2, 3, 2, 3));
        assert!(env.cc_holds());
        assert!(p(0, 3, 0, 2).intersection(&p(0, 2, 0, 2)).is_err());
    }

    #[test]
    fn determinism_and_translation() {
        assert_eq!(p(0, 2, 0, 2).as_translation().unwrap(), Some(2));
        assert!(p(1, 2, 1, 2).is_inertial().unwrap());
        assert_eq!(p(1, 2, 1, 2).as_translation().unwrap(), None);
        assert_eq!(p(0, 0, 0, 0).as_translation().unwrap(), Some(0));
        assert!(p(0, 3, 0, 2).is_deterministic().is_err());
    }

    #[test]
    fn inclusion_and_symmetry() {
        assert!(p(1, 2, 1, 2).includes(&p(2, 3, 2, 3)).unwrap());
        assert!(!p(1, 2, 1, 2).includes(&p(0, 3, 0, 3)).unwrap());
        assert!(p(1, 3, 2, 4).includes(&p(1, 3, 2, 4)).unwrap());
        assert!(p(1, 2, 1, 2).is_symmetrical());
        assert!(!p(1, 2, 0, 2).is_symmetrical());
        assert!(p(0, 5, 0, 5).is_symmetrical());
    }

    #[test]
    fn serial_composition() {
        assert_eq!(p(1, 2, 1, 2).compose(&p(2, 3, 2, 3)).unwrap(), p(3, 5, 3, 5));
        assert_eq!(p(0, 2, 0, 2).compose(&p(0, 3, 0, 3)).unwrap(), p(0, 5, 0, 5));
        assert_eq!(p(1, 3, 2, 4).compose(&p(0, 0, 0, 0)).unwrap(), p(1, 3, 2, 4));
        let big = BdcParams::new(0, i64::MAX, 0, i64::MAX).unwrap();
        assert!(big.compose(&big).is_err());
    }

    #[test]
    fn fixed_delay_membership() {
        let u = sig(0, &[1, 4]);
        assert!(fdc_member(&u, &u.translate(2).unwrap(), 2).unwrap());
        assert!(!fdc_member(&u, &u, 2).unwrap());
        let one = Signal::constant(true);
        assert!(fdc_member(&one, &one, 7).unwrap());
        assert!(fdc_member(&u, &u, -1).is_err());
    }
}
