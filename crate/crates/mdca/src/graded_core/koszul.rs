#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KoszulError {
    #[error("permutation has length {perm} but {degs} degrees were given")]
    LengthMismatch { perm: usize, degs: usize },
    #[error("not a permutation of 0..{0}")]
    NotBijective(usize),
}

/// Sign of reordering graded items: `perm[i]` is the new position of item `i`.
/// Each inverted pair of items contributes `(-1)^(d_i d_j)`.
pub fn koszul_sign(perm: &[usize], degs: &[i64]) -> Result<i32, KoszulError> {
    if perm.len() != degs.len() {
        return Err(KoszulError::LengthMismatch { perm: perm.len(), degs: degs.len() });
    }
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(KoszulError::NotBijective(n));
        }
        seen[p] = true;
    }
    let mut odd = false;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] && degs[i] % 2 != 0 && degs[j] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    Ok(if odd { -1 } else { 1 })
}

/// `(-1)^n` for any integer `n`.
#[inline]
pub fn parity_sign(n: i64) -> i32 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of stably sorting a sequence of graded items by key, together with the
/// sorted order. Equal keys keep their relative order.
pub fn sort_sign<K: Ord + Copy>(items: &[(K, i64)]) -> (i32, Vec<usize>) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| items[i].0);
    let mut odd = false;
    for i in 0..items.len() {
        if items[i].1 % 2 == 0 {
            continue;
        }
        for j in i + 1..items.len() {
            if items[j].1 % 2 != 0 && items[j].0 < items[i].0 {
                odd = !odd;
            }
        }
    }
    (if odd { -1 } else { 1 }, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_of_odd_items() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), Ok(-1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]), Ok(1));
    }

    #[test]
    fn identity_is_plus() {
        assert_eq!(koszul_sign(&[0, 1, 2, 3], &[1, 3, 5, 7]), Ok(1));
    }

    #[test]
    fn errors() {
        assert!(matches!(koszul_sign(&[0, 1], &[1]), Err(KoszulError::LengthMismatch { .. })));
        assert_eq!(koszul_sign(&[0, 0], &[1, 1]), Err(KoszulError::NotBijective(2)));
    }

    #[test]
    fn sort_sign_matches_koszul() {
        let items = [(3u32, 1), (1, 1), (2, 2)];
        let (s, order) = sort_sign(&items);
        assert_eq!(order, vec![1, 2, 0]);
        let mut perm = vec![0; 3];
        for (pos, &i) in order.iter().enumerate() {
            perm[i] = pos;
        }
        assert_eq!(koszul_sign(&perm, &[1, 1, 2]).unwrap(), s);
    }
}
