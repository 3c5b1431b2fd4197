//! Entry types the groupoid engine can run on.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::cartan::{cartan_entry_from, unit_solve_power, CartanEntry};
use crate::scalars::{Order, Scalar, Unit};

pub(crate) trait Entry: Clone + Eq + Hash + fmt::Debug {
    fn mul(&self, o: &Self) -> Self;
    fn pow(&self, e: i64) -> Self;
    fn is_one(&self) -> bool;
    /// c_ij from a = q_ii and t = q̃_ij.
    fn cartan(a: &Self, t: &Self, n_max: u64) -> CartanEntry;
    /// min{n ≥ 1 : (n)_x = 0}, None for ∞.
    fn height(&self) -> Option<u64>;
    fn to_scalar(&self) -> Scalar;
}

impl Entry for Unit {
    fn mul(&self, o: &Self) -> Self {
        Unit::mul(*self, *o)
    }

    fn pow(&self, e: i64) -> Self {
        Unit::pow(*self, e)
    }

    fn is_one(&self) -> bool {
        Unit::is_one(*self)
    }

    fn cartan(a: &Self, t: &Self, _n_max: u64) -> CartanEntry {
        if t.is_one() {
            return CartanEntry::Value(0);
        }
        match a.order() {
            Order::Finite(1) => CartanEntry::NotReflectable { exact: true },
            Order::Finite(n) => {
                let v = unit_solve_power(*a, *t).map_or(n - 1, |f| f.min(n - 1));
                CartanEntry::Value(-(v as i64))
            }
            _ => match unit_solve_power(*a, *t) {
                Some(v) => CartanEntry::Value(-(v as i64)),
                None => CartanEntry::NotReflectable { exact: true },
            },
        }
    }

    fn height(&self) -> Option<u64> {
        match self.order() {
            Order::Finite(n) if n >= 2 => Some(n),
            _ => None,
        }
    }

    fn to_scalar(&self) -> Scalar {
        Unit::to_scalar(*self)
    }
}

/// A scalar inside an enumeration where every value shares one cyclotomic
/// order, so structural hashing agrees with equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fixed(pub Scalar);

impl Hash for Fixed {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0
            .key_at(self.0.cyclotomic_order())
            .expect("own order")
            .hash(state)
    }
}

impl Entry for Fixed {
    fn mul(&self, o: &Self) -> Self {
        Fixed(&self.0 * &o.0)
    }

    fn pow(&self, e: i64) -> Self {
        Fixed(self.0.pow(e).expect("braiding entries are nonzero"))
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn cartan(a: &Self, t: &Self, n_max: u64) -> CartanEntry {
        cartan_entry_from(&a.0, &t.0, n_max).expect("braiding entries are nonzero")
    }

    fn height(&self) -> Option<u64> {
        match self.0.order_of() {
            Ok(Order::Finite(n)) if n >= 2 => Some(n),
            _ => None,
        }
    }

    fn to_scalar(&self) -> Scalar {
        self.0.clone()
    }
}
