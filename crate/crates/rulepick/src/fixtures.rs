//! Shared profiles for unit tests.

use crate::Profile;

/// Three groups of `k` voters: a>b>c, a>c>b, b>c>a.
pub(crate) fn three_groups(k: usize) -> Profile {
    Profile::from_groups(3, &[(k, vec![0, 1, 2]), (k, vec![0, 2, 1]), (k, vec![1, 2, 0])]).unwrap()
}

pub(crate) fn three_cycle() -> Profile {
    Profile::from_orders(3, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
}
