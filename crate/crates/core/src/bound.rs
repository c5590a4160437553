//! Limits on brute-force enumeration.

/// Default largest modulus for enumeration.
pub const DEFAULT_MAX_K: u32 = 5;
/// Moduli at or above this need explicit opt-in.
pub const HEAVY_FROM: u32 = 5;
/// Environment variable overriding [`DEFAULT_MAX_K`].
pub const MAX_K_ENV: &str = "LIFTKIT_MAX_K";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("modulus {k} exceeds the enumeration bound {max} (set {env} to raise it)", env = MAX_K_ENV)]
    Exceeded { k: u32, max: u32 },
    #[error("modulus {0} is a heavy computation; pass --allow-heavy")]
    Heavy(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBound {
    pub max_k: u32,
    pub allow_heavy: bool,
}

impl Default for EnumerationBound {
    fn default() -> Self {
        EnumerationBound { max_k: DEFAULT_MAX_K, allow_heavy: false }
    }
}

impl EnumerationBound {
    /// Reads `LIFTKIT_MAX_K` if set and parseable.
    pub fn from_env(allow_heavy: bool) -> Self {
        let max_k = std::env::var(MAX_K_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_K);
        EnumerationBound { max_k, allow_heavy }
    }

    pub fn permissive() -> Self {
        EnumerationBound { max_k: DEFAULT_MAX_K, allow_heavy: true }
    }

    pub fn check(&self, k: u32) -> Result<(), BoundError> {
        if k > self.max_k {
            return Err(BoundError::Exceeded { k, max: self.max_k });
        }
        if k >= HEAVY_FROM && !self.allow_heavy {
            return Err(BoundError::Heavy(k));
        }
        Ok(())
    }
}
