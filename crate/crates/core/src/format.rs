//! Seed files: `{n, epsilon, d, kind, labels}` with `epsilon` row-major.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{Feed, Seed, SeedKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub n: usize,
    pub epsilon: Vec<i64>,
    #[serde(default)]
    pub d: Option<Vec<u64>>,
    #[serde(default)]
    pub kind: Option<SeedKind>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl SeedFile {
    pub fn from_seed(seed: &Seed) -> Self {
        let n = seed.feed.n();
        SeedFile {
            n,
            epsilon: seed.feed.epsilon().iter().flatten().copied().collect(),
            d: Some(seed.feed.d().to_vec()),
            kind: Some(seed.kind),
            labels: Some(seed.labels.clone()),
        }
    }

    pub fn from_feed(feed: &Feed) -> Self {
        SeedFile {
            n: feed.n(),
            epsilon: feed.epsilon().iter().flatten().copied().collect(),
            d: Some(feed.d().to_vec()),
            kind: None,
            labels: None,
        }
    }

    pub fn feed(&self) -> Result<Feed> {
        let n = self.n;
        if self.epsilon.len() != n * n {
            return Err(Error::Dimension(format!(
                "epsilon has {} entries, expected {}",
                self.epsilon.len(),
                n * n
            )));
        }
        let rows = self.epsilon.chunks(n.max(1)).map(|r| r.to_vec()).collect();
        let d = self.d.clone().unwrap_or_else(|| vec![1; n]);
        Feed::new(rows, d)
    }

    /// Missing kind defaults to `A`, missing labels to the standard ones.
    pub fn seed(&self) -> Result<Seed> {
        let feed = self.feed()?;
        let kind = self.kind.unwrap_or(SeedKind::A);
        match &self.labels {
            Some(l) => Seed::new(feed, kind, l.clone()),
            None => Ok(Seed::with_default_labels(feed, kind)),
        }
    }
}

pub fn parse_seed_json(text: &str) -> Result<Seed> {
    let file: SeedFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.seed()
}

pub fn seed_to_json(seed: &Seed) -> String {
    serde_json::to_string(&SeedFile::from_seed(seed)).expect("seed files always serialize")
}

/// Named feeds: `a1`, `a1xa1`, `a2`, `b2`, `g2`, `a3`, `markov`, `zeroN`.
pub fn builtin_feed(name: &str) -> Option<Feed> {
    let f = match name.to_ascii_lowercase().as_str() {
        "a1" => Feed::zero(1),
        "a1xa1" => Feed::zero(2),
        "a2" => Feed::skew(vec![vec![0, 1], vec![-1, 0]]).ok()?,
        "b2" => Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).ok()?,
        "g2" => Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).ok()?,
        "a3" => Feed::skew(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).ok()?,
        "markov" => Feed::skew(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).ok()?,
        other => {
            let n: usize = other.strip_prefix("zero")?.parse().ok()?;
            if n == 0 {
                return None;
            }
            Feed::zero(n)
        }
    };
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let feed = builtin_feed("g2").unwrap();
        let seed = Seed::with_default_labels(feed, SeedKind::D);
        let text = seed_to_json(&seed);
        assert!(text.contains("\"epsilon\":[0,3,-1,0]"));
        assert_eq!(parse_seed_json(&text).unwrap(), seed);
    }

    #[test]
    fn defaults_and_errors() {
        let s = parse_seed_json(r#"{"n":2,"epsilon":[0,1,-1,0]}"#).unwrap();
        assert_eq!(s.kind, SeedKind::A);
        assert_eq!(s.labels, vec!["A1", "A2"]);
        assert!(matches!(
            parse_seed_json(r#"{"n":2,"epsilon":[0,1,-1]}"#),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            parse_seed_json(r#"{"n":2,"epsilon":[0,1,1,0]}"#),
            Err(Error::NotSkewSymmetrizable(_))
        ));
        assert!(matches!(parse_seed_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn builtins_are_valid() {
        for name in ["a1", "a1xa1", "a2", "b2", "g2", "a3", "markov", "zero4"] {
            assert!(builtin_feed(name).is_some(), "{name}");
        }
        assert!(builtin_feed("zero0").is_none());
        assert!(builtin_feed("e8").is_none());
    }
}
