use std::sync::Arc;

use crate::error::{Error, Result};

/// Span restriction attached to a non-terminal occurrence in a production.
///
/// A span is given by its start position `i` (0-based) and its length `j`,
/// so it covers positions `[i, i+j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanPredicate {
    /// No restriction.
    Always,
    /// `lo <= j <= hi`; `hi = None` leaves the upper side unbounded (the
    /// sequence length bounds any realizable span).
    LengthIn { lo: usize, hi: Option<usize> },
    /// Every position of the span must be marked open in the mask. The mask
    /// must have the length of the sequence the predicate is evaluated on.
    OpenHours { mask: Arc<[bool]> },
    /// Conjunction; arises from unit-rule inlining during CNF conversion.
    All(Vec<SpanPredicate>),
}

impl SpanPredicate {
    pub fn length_in(lo: usize, hi: Option<usize>) -> Result<Self> {
        if let Some(h) = hi {
            if lo > h {
                return Err(Error::input(format!("length bounds [{lo}, {h}] are empty")));
            }
        }
        Ok(SpanPredicate::LengthIn { lo, hi })
    }

    pub fn open_hours(mask: impl Into<Arc<[bool]>>) -> Self {
        SpanPredicate::OpenHours { mask: mask.into() }
    }

    /// Conjunction with `Always` absorbed.
    pub fn and(self, other: SpanPredicate) -> SpanPredicate {
        match (self, other) {
            (SpanPredicate::Always, p) | (p, SpanPredicate::Always) => p,
            (SpanPredicate::All(mut v), SpanPredicate::All(w)) => {
                v.extend(w);
                SpanPredicate::All(v)
            }
            (SpanPredicate::All(mut v), p) => {
                v.push(p);
                SpanPredicate::All(v)
            }
            (p, SpanPredicate::All(mut v)) => {
                v.insert(0, p);
                SpanPredicate::All(v)
            }
            (p, q) => SpanPredicate::All(vec![p, q]),
        }
    }

    pub fn is_always(&self) -> bool {
        matches!(self, SpanPredicate::Always)
    }

    /// Evaluates the predicate on the span starting at `start` with length
    /// `len`. Errors if an open-hours mask is too short for the span.
    pub fn eval(&self, start: usize, len: usize) -> Result<bool> {
        match self {
            SpanPredicate::Always => Ok(true),
            SpanPredicate::LengthIn { lo, hi } => {
                Ok(*lo <= len && hi.is_none_or(|h| len <= h))
            }
            SpanPredicate::OpenHours { mask } => {
                if start + len > mask.len() {
                    return Err(Error::input(format!(
                        "open-hours mask has length {} but span reaches position {}",
                        mask.len(),
                        start + len
                    )));
                }
                Ok(mask[start..start + len].iter().all(|&b| b))
            }
            SpanPredicate::All(ps) => {
                for p in ps {
                    if !p.eval(start, len)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Same as [`eval`](Self::eval) but for callers that already validated
    /// every mask against the sequence length.
    pub(crate) fn holds(&self, start: usize, len: usize) -> bool {
        self.eval(start, len)
            .expect("span predicate validated against sequence length")
    }

    /// Checks that every open-hours mask matches the sequence length `n`.
    pub fn validate_for_len(&self, n: usize) -> Result<()> {
        match self {
            SpanPredicate::OpenHours { mask } if mask.len() != n => Err(Error::input(format!(
                "open-hours mask has length {} but the sequence has length {n}",
                mask.len()
            ))),
            SpanPredicate::All(ps) => ps.iter().try_for_each(|p| p.validate_for_len(n)),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_grammar_bounds() {
        // f_W(i, j) = j >= 4
        let f_w = SpanPredicate::length_in(4, None).unwrap();
        assert!(f_w.eval(3, 4).unwrap());
        assert!(!f_w.eval(3, 3).unwrap());
        // f_L(i, j) = (j = 4)
        let f_l = SpanPredicate::length_in(4, Some(4)).unwrap();
        assert!(!f_l.eval(10, 3).unwrap());
        assert!(f_l.eval(10, 4).unwrap());
        // f_P(i, j) = 13 <= j <= 24
        let f_p = SpanPredicate::length_in(13, Some(24)).unwrap();
        assert!(f_p.eval(0, 13).unwrap());
        assert!(f_p.eval(0, 24).unwrap());
        assert!(!f_p.eval(0, 12).unwrap());
        assert!(!f_p.eval(0, 25).unwrap());
    }

    #[test]
    fn open_hours_checks_whole_span() {
        let p = SpanPredicate::open_hours(vec![false, true, true, false]);
        assert!(p.eval(1, 2).unwrap());
        assert!(!p.eval(0, 2).unwrap());
        assert!(!p.eval(2, 2).unwrap());
        assert!(p.eval(0, 5).is_err());
    }

    #[test]
    fn conjunction() {
        let p = SpanPredicate::length_in(2, Some(4))
            .unwrap()
            .and(SpanPredicate::length_in(3, None).unwrap());
        assert!(p.eval(0, 3).unwrap());
        assert!(!p.eval(0, 2).unwrap());
        assert!(!p.eval(0, 5).unwrap());
        assert!(SpanPredicate::Always
            .and(SpanPredicate::Always)
            .is_always());
    }

    #[test]
    fn bad_bounds_rejected() {
        assert!(SpanPredicate::length_in(5, Some(4)).is_err());
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::SpanPredicate;

    proptest! {
        #[test]
        fn always_holds_everywhere(start in 0usize..100, len in 1usize..100) {
            prop_assert!(SpanPredicate::Always.eval(start, len).unwrap());
        }

        #[test]
        fn length_bounds_are_sharp(lo in 1usize..20, extra in 0usize..20, len in 1usize..60) {
            let hi = lo + extra;
            let p = SpanPredicate::length_in(lo, Some(hi)).unwrap();
            prop_assert_eq!(p.eval(0, len).unwrap(), (lo..=hi).contains(&len));
            let open = SpanPredicate::length_in(lo, None).unwrap();
            prop_assert_eq!(open.eval(0, len).unwrap(), len >= lo);
        }
    }
}
