use std::fmt;

/// Largest number of distinct channels a network may declare.
pub const MAX_CHANNELS: u8 = 32;

/// Channel identifier, `0 <= id < MAX_CHANNELS`.
pub type Channel = u8;

/// A set of orthogonal channels packed into one machine word.
///
/// Iteration is ascending by channel id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ChannelSet(u32);

impl ChannelSet {
    pub const EMPTY: ChannelSet = ChannelSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ChannelSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Panics if `channel >= MAX_CHANNELS`.
    pub fn single(channel: Channel) -> Self {
        assert!(channel < MAX_CHANNELS, "channel {channel} out of range");
        ChannelSet(1 << channel)
    }

    pub fn insert(&mut self, channel: Channel) {
        *self = self.union(ChannelSet::single(channel));
    }

    pub fn contains(self, channel: Channel) -> bool {
        channel < MAX_CHANNELS && self.0 & (1 << channel) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 & other.0)
    }

    pub fn union(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: ChannelSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest channel id in the set.
    pub fn first(self) -> Option<Channel> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Channel)
    }

    /// Largest channel id in the set.
    pub fn max(self) -> Option<Channel> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as Channel)
    }

    /// The `n` lowest-numbered channels of the set.
    pub fn lowest(self, n: usize) -> ChannelSet {
        self.iter().take(n).collect()
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl FromIterator<Channel> for ChannelSet {
    fn from_iter<I: IntoIterator<Item = Channel>>(iter: I) -> Self {
        let mut set = ChannelSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl IntoIterator for ChannelSet {
    type Item = Channel;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u32);

impl Iterator for Iter {
    type Item = Channel;

    fn next(&mut self) -> Option<Channel> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(c as Channel)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl fmt::Debug for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Comma-separated ascending ids, e.g. `1,2,5`.
impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_ascending_and_deduplicated() {
        let set: ChannelSet = [5, 1, 3, 1, 31].into_iter().collect();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![1, 3, 5, 31]);
        assert_eq!(set.len(), 4);
        assert_eq!(set.first(), Some(1));
        assert_eq!(set.max(), Some(31));
        assert_eq!(set.to_string(), "1,3,5,31");
    }

    #[test]
    fn lowest_keeps_smallest_ids() {
        let set: ChannelSet = [9, 2, 7, 4].into_iter().collect();
        assert_eq!(set.lowest(3).iter().collect::<Vec<_>>(), vec![2, 4, 7]);
        assert_eq!(set.lowest(10), set);
    }

    #[test]
    fn set_algebra() {
        let a: ChannelSet = [1, 2].into_iter().collect();
        let b: ChannelSet = [2, 3].into_iter().collect();
        assert_eq!(a.intersection(b), ChannelSet::single(2));
        assert_eq!(a.union(b).len(), 3);
        assert!(ChannelSet::single(2).is_subset(a));
        assert!(!b.is_subset(a));
        assert!(!a.contains(40));
    }
}
