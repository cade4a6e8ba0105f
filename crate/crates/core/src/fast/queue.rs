use crate::error::QueueFault;

/// Fixed-capacity FIFO of channel vectors backed by a flat ring buffer.
///
/// Queue `l` caches the inputs layer `l` consumed over the last
/// `(w - 1) * dilation` steps, oldest at the front. Between generation steps
/// it is always full; a step pops one entry and pushes one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvQueue {
    buffer: Vec<f64>,
    channels: usize,
    capacity: usize,
    dilation: usize,
    head: usize,
    len: usize,
}

impl ConvQueue {
    /// A full queue of `(width - 1) * dilation` zero vectors.
    pub fn zeroed(width: usize, dilation: usize, channels: usize) -> Self {
        let capacity = (width - 1) * dilation;
        Self {
            buffer: vec![0.0; capacity * channels],
            channels,
            capacity,
            dilation,
            head: 0,
            len: capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.capacity
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dilation(&self) -> usize {
        self.dilation
    }

    /// Entry `offset` positions behind the front (0 = oldest).
    pub fn get(&self, offset: usize) -> &[f64] {
        assert!(offset < self.len, "offset {offset} out of range for length {}", self.len);
        let slot = (self.head + offset) % self.capacity;
        &self.buffer[slot * self.channels..(slot + 1) * self.channels]
    }

    pub fn front(&self) -> &[f64] {
        self.get(0)
    }

    /// Reads the `w - 1` past inputs for taps `k = 1..w`, which sit at
    /// offsets `(w - 1 - k) * dilation` from the front, into `dst`, then
    /// discards the front entry. Only legal on a full queue.
    pub fn pop_taps(&mut self, dst: &mut Vec<f64>) -> Result<(), QueueFault> {
        if !self.is_full() {
            return Err(QueueFault::PopWithoutPush);
        }
        let past_taps = self.capacity / self.dilation;
        for k in 1..=past_taps {
            dst.extend_from_slice(self.get((past_taps - k) * self.dilation));
        }
        self.head = (self.head + 1) % self.capacity;
        self.len -= 1;
        Ok(())
    }

    /// Appends `entry` at the back. Only legal when one short of capacity.
    pub fn push_back(&mut self, entry: &[f64]) -> Result<(), QueueFault> {
        if self.is_full() {
            return Err(QueueFault::PushWithoutPop);
        }
        assert_eq!(entry.len(), self.channels, "entry has the wrong channel count");
        let slot = (self.head + self.len) % self.capacity;
        self.buffer[slot * self.channels..(slot + 1) * self.channels].copy_from_slice(entry);
        self.len += 1;
        Ok(())
    }

    /// Entries front to back.
    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}
