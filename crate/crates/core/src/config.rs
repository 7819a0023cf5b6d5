/// Size limits shared by all algorithms.
///
/// Every cap is checked before the corresponding structure is materialized,
/// and exceeding it yields [`crate::Error::ResourceCap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest syntactic or generated monoid.
    pub monoid_cap: usize,
    /// Largest monoid `M` whose powerset semiring `2^M` may be built.
    pub powerset_cap: usize,
    /// Largest image monoid of the auxiliary map used by the G-operation.
    pub powerset2_cap: usize,
    pub amt_alphabet_cap: usize,
    pub amt_monoid_cap: usize,
    pub delay_dmax: usize,
    pub trace: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            monoid_cap: 4096,
            powerset_cap: 16,
            powerset2_cap: 4096,
            amt_alphabet_cap: 3,
            amt_monoid_cap: 10,
            delay_dmax: 8,
            trace: false,
        }
    }
}
