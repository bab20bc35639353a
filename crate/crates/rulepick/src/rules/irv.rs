//! Instant runoff as a social welfare function.

use crate::{AlternativeId, Error, Profile, Result, StrictRanking, WeakRanking};

/// Reverse elimination order; the smallest id goes first among the weakest.
pub fn irv(p: &Profile) -> Result<WeakRanking> {
    if !p.is_full() {
        return Err(Error::IrvRequiresFullRankings);
    }
    let m = p.m();
    let mut alive = vec![true; m];
    let mut eliminated = Vec::with_capacity(m);
    for _ in 0..m {
        let mut tally = vec![0u64; m];
        for r in p.rankings() {
            if let Some(a) = r.order().iter().find(|a| alive[a.0]) {
                tally[a.0] += 1;
            }
        }
        let loser = (0..m)
            .filter(|&a| alive[a])
            .min_by_key(|&a| (tally[a], a))
            .expect("an alternative is alive");
        alive[loser] = false;
        eliminated.push(AlternativeId(loser));
    }
    eliminated.reverse();
    Ok(WeakRanking::from_strict(&StrictRanking::new(eliminated)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_groups;

    fn strict(o: &[usize]) -> WeakRanking {
        WeakRanking::from_strict(&StrictRanking::from_indices(o).unwrap())
    }

    #[test]
    fn examples() {
        let p = Profile::from_orders(3, &vec![vec![2, 1, 0]; 2]).unwrap();
        assert_eq!(irv(&p).unwrap(), strict(&[2, 1, 0]));
        assert_eq!(irv(&three_groups(1)).unwrap(), strict(&[0, 1, 2]));
        let p = Profile::from_orders(2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(irv(&p).unwrap(), strict(&[1, 0]));
    }

    #[test]
    fn transfers_change_the_winner() {
        // Plurality winner 0 loses once 2's voters transfer to 1.
        let p = Profile::from_groups(3, &[(4, vec![0, 1, 2]), (3, vec![1, 0, 2]), (2, vec![2, 1, 0])]).unwrap();
        assert_eq!(irv(&p).unwrap(), strict(&[1, 0, 2]));
    }

    #[test]
    fn ties_eliminate_smallest_id() {
        let p = Profile::from_orders(3, &[vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        // 2 goes first; then 0 and 1 tie and 0 is eliminated.
        assert_eq!(irv(&p).unwrap(), strict(&[1, 0, 2]));
    }

    #[test]
    fn partial_profiles_rejected() {
        let p = Profile::from_orders(3, &[vec![0, 1]]).unwrap();
        assert_eq!(irv(&p), Err(Error::IrvRequiresFullRankings));
    }
}
