//! Instants, half-open intervals and normalized interval sets.
//!
//! All time handling in the crate goes through these types. Intervals are
//! half-open `[start, end)`: the start instant belongs to the interval, the
//! end does not. That convention makes abutting intervals tile the line
//! without overlap, and it is baked into every membership test below.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeError {
    /// time values are nonnegative reals
    Negative(f64),
    NotANumber,
    /// interval with start >= end would be empty
    EmptyInterval,
    /// only an interval end may be unbounded
    NonFiniteStart,
}

impl fmt::Display for TimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeError::Negative(v) => write!(f, "negative time {v}"),
            TimeError::NotANumber => write!(f, "time is NaN"),
            TimeError::EmptyInterval => write!(f, "interval start must precede end"),
            TimeError::NonFiniteStart => write!(f, "interval start must be finite"),
        }
    }
}

impl core::error::Error for TimeError {}

/// A point on the time axis. Nonnegative, never NaN; positive infinity is
/// allowed so that unbounded interval ends have a representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInstant(f64);

impl TimeInstant {
    pub const ZERO: TimeInstant = TimeInstant(0.0);
    pub const INFINITY: TimeInstant = TimeInstant(f64::INFINITY);

    pub fn new(value: f64) -> Result<TimeInstant, TimeError> {
        if value.is_nan() {
            Err(TimeError::NotANumber)
        } else if value < 0.0 {
            Err(TimeError::Negative(value))
        } else {
            Ok(TimeInstant(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// This instant shifted later by a nonnegative delay.
    pub fn after(self, delay: f64) -> TimeInstant {
        debug_assert!(delay >= 0.0 && !delay.is_nan());
        TimeInstant(self.0 + delay)
    }
}

impl Eq for TimeInstant {}

impl Ord for TimeInstant {
    fn cmp(&self, other: &Self) -> Ordering {
        // no NaN by construction, so total_cmp agrees with the usual order
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for TimeInstant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TimeInstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "inf")
        }
    }
}

impl From<TimeInstant> for f64 {
    fn from(t: TimeInstant) -> f64 {
        t.0
    }
}

/// Half-open span `[start, end)`. Nonempty by construction; the end may be
/// `TimeInstant::INFINITY`, the start may not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeInterval {
    start: TimeInstant,
    end: TimeInstant,
}

impl TimeInterval {
    pub fn new(start: TimeInstant, end: TimeInstant) -> Result<TimeInterval, TimeError> {
        if !start.is_finite() {
            Err(TimeError::NonFiniteStart)
        } else if start >= end {
            Err(TimeError::EmptyInterval)
        } else {
            Ok(TimeInterval { start, end })
        }
    }

    pub fn from_values(start: f64, end: f64) -> Result<TimeInterval, TimeError> {
        TimeInterval::new(TimeInstant::new(start)?, TimeInstant::new(end)?)
    }

    pub fn start(&self) -> TimeInstant {
        self.start
    }

    pub fn end(&self) -> TimeInstant {
        self.end
    }

    pub fn contains(&self, t: TimeInstant) -> bool {
        self.start <= t && t < self.end
    }

    pub fn contains_interval(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn is_unbounded(&self) -> bool {
        !self.end.is_finite()
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// A union of half-open intervals kept in normal form: sorted by start,
/// pairwise disjoint, and with abutting intervals merged. `[1,2)` followed by
/// `[2,4)` is stored as the single interval `[1,4)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<TimeInterval>,
}

impl IntervalSet {
    pub fn new() -> IntervalSet {
        IntervalSet::default()
    }

    pub fn from_intervals<I>(intervals: I) -> IntervalSet
    where
        I: IntoIterator<Item = TimeInterval>,
    {
        let mut set = IntervalSet::new();
        for iv in intervals {
            set.insert(iv);
        }
        set
    }

    /// Adds an interval, merging it with anything it overlaps or abuts.
    pub fn insert(&mut self, iv: TimeInterval) {
        let mut start = iv.start;
        let mut end = iv.end;

        // first stored interval that could interact with iv: the one before
        // the insertion point may still touch iv at its end
        let mut lo = self.intervals.partition_point(|x| x.start < start);
        if lo > 0 && self.intervals[lo - 1].end >= start {
            lo -= 1;
            start = self.intervals[lo].start;
        }
        let mut hi = lo;
        while hi < self.intervals.len() && self.intervals[hi].start <= end {
            if self.intervals[hi].end > end {
                end = self.intervals[hi].end;
            }
            hi += 1;
        }
        self.intervals
            .splice(lo..hi, core::iter::once(TimeInterval { start, end }));
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = self.clone();
        for iv in &other.intervals {
            out.insert(*iv);
        }
        out
    }

    pub fn contains(&self, t: TimeInstant) -> bool {
        let idx = self.intervals.partition_point(|x| x.start <= t);
        idx > 0 && t < self.intervals[idx - 1].end
    }

    /// True when some stored interval wholly contains `iv`. Normal form makes
    /// a spanning union impossible, so a single interval must do it.
    pub fn covers(&self, iv: &TimeInterval) -> bool {
        let idx = self.intervals.partition_point(|x| x.start <= iv.start);
        idx > 0 && iv.end <= self.intervals[idx - 1].end
    }

    pub fn intervals(&self) -> &[TimeInterval] {
        &self.intervals
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TimeInterval> {
        self.intervals.iter()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

impl<'a> IntoIterator for &'a IntervalSet {
    type Item = &'a TimeInterval;
    type IntoIter = core::slice::Iter<'a, TimeInterval>;

    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: f64) -> TimeInstant {
        TimeInstant::new(v).unwrap()
    }

    fn iv(a: f64, b: f64) -> TimeInterval {
        TimeInterval::from_values(a, b).unwrap()
    }

    #[test]
    fn instant_rejects_bad_values() {
        assert_eq!(TimeInstant::new(-1.0), Err(TimeError::Negative(-1.0)));
        assert_eq!(TimeInstant::new(f64::NAN), Err(TimeError::NotANumber));
        assert!(TimeInstant::new(f64::INFINITY).is_ok());
    }

    #[test]
    fn interval_must_be_nonempty_with_finite_start() {
        assert_eq!(
            TimeInterval::from_values(2.0, 2.0),
            Err(TimeError::EmptyInterval)
        );
        assert_eq!(
            TimeInterval::from_values(3.0, 2.0),
            Err(TimeError::EmptyInterval)
        );
        assert_eq!(
            TimeInterval::new(TimeInstant::INFINITY, TimeInstant::INFINITY),
            Err(TimeError::NonFiniteStart)
        );
        assert!(TimeInterval::new(t(0.0), TimeInstant::INFINITY).is_ok());
    }

    #[test]
    fn interval_membership_is_half_open() {
        let x = iv(1.0, 2.0);
        assert!(x.contains(t(1.0)));
        assert!(x.contains(t(1.5)));
        assert!(!x.contains(t(2.0)));
        assert!(!x.contains(t(0.5)));
    }

    #[test]
    fn adjacent_intervals_merge() {
        let set = IntervalSet::from_intervals([iv(1.0, 2.0), iv(2.0, 4.0)]);
        assert_eq!(set.intervals(), &[iv(1.0, 4.0)]);
    }

    #[test]
    fn disjoint_intervals_stay_apart() {
        let set = IntervalSet::from_intervals([iv(3.0, 4.0), iv(1.0, 2.0)]);
        assert_eq!(set.intervals(), &[iv(1.0, 2.0), iv(3.0, 4.0)]);
    }

    #[test]
    fn overlapping_inserts_collapse() {
        let set = IntervalSet::from_intervals([iv(1.0, 3.0), iv(2.0, 5.0), iv(4.5, 6.0)]);
        assert_eq!(set.intervals(), &[iv(1.0, 6.0)]);
    }

    #[test]
    fn insert_bridges_across_many() {
        let mut set = IntervalSet::from_intervals([iv(1.0, 2.0), iv(3.0, 4.0), iv(5.0, 6.0)]);
        set.insert(iv(1.5, 5.5));
        assert_eq!(set.intervals(), &[iv(1.0, 6.0)]);
    }

    #[test]
    fn normalization_is_idempotent() {
        let set = IntervalSet::from_intervals([iv(0.0, 1.0), iv(2.0, 3.0), iv(3.0, 7.0)]);
        let again = IntervalSet::from_intervals(set.intervals().iter().copied());
        assert_eq!(set, again);
    }

    #[test]
    fn membership_after_union() {
        let a = IntervalSet::from_intervals([iv(0.0, 1.0)]);
        let b = IntervalSet::from_intervals([iv(2.0, 3.0)]);
        let u = a.union(&b);
        assert!(u.contains(t(0.0)));
        assert!(!u.contains(t(1.0)));
        assert!(u.contains(t(2.0)));
        assert!(!u.contains(t(3.0)));
        assert!(!u.contains(t(1.5)));
    }

    #[test]
    fn covers_respects_boundaries() {
        let set = IntervalSet::from_intervals([iv(1.0, 4.0), iv(6.0, 8.0)]);
        assert!(set.covers(&iv(1.0, 4.0)));
        assert!(set.covers(&iv(2.0, 3.0)));
        assert!(!set.covers(&iv(3.0, 7.0)));
        assert!(!set.covers(&iv(4.0, 5.0)));
    }

    #[test]
    fn unbounded_end_absorbs_later_intervals() {
        let mut set = IntervalSet::new();
        set.insert(TimeInterval::new(t(5.0), TimeInstant::INFINITY).unwrap());
        set.insert(iv(7.0, 9.0));
        set.insert(iv(1.0, 2.0));
        assert_eq!(set.len(), 2);
        assert!(set.contains(t(1e12)));
        assert!(!set.contains(t(3.0)));
    }
}
