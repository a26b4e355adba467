//! Work budgets for the exponential oracles.
//!
//! The caps keep the exhaustive machinery at desk scale: tour enumeration is
//! (n-1)!/2, the Held-Karp table is O(2^n n^2), and the facet rank matrix is
//! n(n-3)/2 by n(n-1)/2. Each can be raised through the `CIRCLET_CAPS`
//! environment variable, formatted as `enumeration/dp/rank` (e.g. `12/20/16`).

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest n for exhaustive tour enumeration and exhaustive separation.
    pub enumeration: usize,
    /// Largest n for the Held-Karp dynamic program.
    pub dp: usize,
    /// Largest n for the facet rank certificate.
    pub rank: usize,
    /// Largest n for brute-force edge-length feasibility search.
    pub edge_length: usize,
    /// Largest n for the subtour-LP feasibility check (polynomial; generous).
    pub subtour: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 12,
            dp: 20,
            rank: 16,
            edge_length: 10,
            subtour: 64,
        }
    }
}

impl Caps {
    /// Default caps, with `enumeration/dp/rank` overridden by `CIRCLET_CAPS`
    /// when the variable is set and well formed. Malformed values are ignored.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var("CIRCLET_CAPS") {
            let parts: Vec<_> = raw.split('/').collect();
            if parts.len() == 3 {
                if let (Ok(e), Ok(d), Ok(r)) = (
                    parts[0].trim().parse(),
                    parts[1].trim().parse(),
                    parts[2].trim().parse(),
                ) {
                    caps.enumeration = e;
                    caps.dp = d;
                    caps.rank = r;
                }
            }
        }
        caps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let caps = Caps::default();
        assert_eq!(caps.enumeration, 12);
        assert_eq!(caps.dp, 20);
        assert_eq!(caps.rank, 16);
    }
}
