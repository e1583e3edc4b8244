//! Mutation graph exploration up to relabeling and search for trivial
//! cluster transformations.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use rand::Rng;
use serde::Serialize;

use crate::classical::{is_trivial_at_points, Step, Word};
use crate::error::{Error, Result};
use crate::seed::{Feed, Permutation, Rank2Type, SeedKind};

/// Largest rank for which relabelings are enumerated exhaustively.
pub const MAX_FINGERPRINT_RANK: usize = 8;

/// Minimal `(d, ε)` over all simultaneous relabelings, flattened as `d`
/// followed by the rows of `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FeedFingerprint {
    pub n: usize,
    pub key: Vec<i64>,
}

impl FeedFingerprint {
    pub fn epsilon(&self) -> Vec<Vec<i64>> {
        self.key[self.n..].chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn d(&self) -> Vec<u64> {
        self.key[..self.n].iter().map(|&x| x as u64).collect()
    }

    pub fn feed(&self) -> Feed {
        Feed::new(self.epsilon(), self.d()).expect("fingerprint of a valid feed")
    }
}

impl fmt::Display for FeedFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={:?} epsilon={:?}", self.d(), self.epsilon())
    }
}

fn key_of(feed: &Feed, sigma: &Permutation) -> Vec<i64> {
    let n = feed.n();
    let inv = sigma.inverse();
    let mut key = Vec::with_capacity(n + n * n);
    key.extend((0..n).map(|i| feed.d_at(inv.apply(i)) as i64));
    for i in 0..n {
        key.extend((0..n).map(|j| feed.eps(inv.apply(i), inv.apply(j))));
    }
    key
}

pub fn fingerprint(feed: &Feed) -> Result<FeedFingerprint> {
    let n = feed.n();
    if n > MAX_FINGERPRINT_RANK {
        return Err(Error::Config(format!(
            "fingerprinting enumerates all relabelings; rank {n} exceeds {MAX_FINGERPRINT_RANK}"
        )));
    }
    let key = Permutation::all(n)
        .iter()
        .map(|s| key_of(feed, s))
        .min()
        .expect("at least one permutation");
    Ok(FeedFingerprint { n, key })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploreEdge {
    pub from: usize,
    pub to: usize,
    /// 0-based mutation index on the stored representative of `from`.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExploreGraph {
    pub nodes: Vec<FeedFingerprint>,
    pub depth_of: Vec<usize>,
    pub edges: Vec<ExploreEdge>,
    pub max_depth: usize,
    /// The breadth-first search ran out of new fingerprints before the
    /// depth limit.
    pub closed: bool,
}

/// Breadth-first closure of the mutation class of `feed`, up to relabeling.
pub fn explore(feed: &Feed, max_depth: usize) -> Result<ExploreGraph> {
    let start = fingerprint(feed)?;
    let mut index: BTreeMap<FeedFingerprint, usize> = BTreeMap::new();
    let mut nodes = vec![start.clone()];
    let mut depth_of = vec![0];
    let mut edges = Vec::new();
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut closed = true;
    while let Some(id) = queue.pop_front() {
        let depth = depth_of[id];
        let rep = nodes[id].feed();
        for k in 0..rep.n() {
            let fp = fingerprint(&rep.mutate(k)?)?;
            let to = match index.get(&fp) {
                Some(&to) => to,
                None => {
                    if depth == max_depth {
                        closed = false;
                        continue;
                    }
                    let to = nodes.len();
                    index.insert(fp.clone(), to);
                    nodes.push(fp);
                    depth_of.push(depth + 1);
                    queue.push_back(to);
                    to
                }
            };
            edges.push(ExploreEdge { from: id, to, k });
        }
    }
    Ok(ExploreGraph {
        nodes,
        depth_of,
        edges,
        max_depth,
        closed,
    })
}

impl ExploreGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph mutations {\n");
        for (i, fp) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{fp}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"m{}\"];", e.from, e.to, e.k + 1);
        }
        s.push_str("}\n");
        s
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "fingerprints: {}", self.nodes.len());
        let _ = writeln!(s, "edges: {}", self.edges.len());
        let _ = writeln!(s, "max_depth: {}", self.max_depth);
        let _ = writeln!(s, "closed: {}", self.closed);
        for (i, fp) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "node {i} depth {}: {fp}", self.depth_of[i]);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KnownGenerator {
    /// `μ_k μ_k`.
    Involution { k: usize },
    /// `(P_(ij) ∘ μ_i)^{h+2}`, possibly with the permutations moved to the end.
    Polygon { i: usize, j: usize, rank2: Rank2Type },
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub method: String,
    pub search_points: usize,
    pub fresh_points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialWord {
    pub word: String,
    pub length: usize,
    /// No proper prefix of the mutation sequence closes up to a trivial word.
    pub primitive: bool,
    pub known: KnownGenerator,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialSearch {
    pub kind: SeedKind,
    pub max_len: usize,
    /// Reduced words: mutations with no immediate repeats, then at most one
    /// permutation.
    pub found: Vec<TrivialWord>,
    /// Involutions and polygon words checked in their literal form.
    pub generators: Vec<TrivialWord>,
}

/// Moves every permutation to the end, using `P_σ μ_k = μ_{σ⁻¹(k)} P_σ`.
pub fn normal_form(word: &Word, n: usize) -> (Vec<usize>, Permutation) {
    let mut muts = Vec::new();
    // σ is the permutation accumulated so far, to be applied after `muts`
    let mut sigma = Permutation::identity(n);
    for step in &word.steps {
        match step {
            Step::Mutate(k) => muts.push(sigma.inverse().apply(*k)),
            Step::Permute(p) => sigma = p.compose(&sigma),
        }
    }
    (muts, sigma)
}

fn word_from(muts: &[usize], sigma: &Permutation) -> Word {
    let mut steps: Vec<Step> = muts.iter().map(|&k| Step::Mutate(k)).collect();
    if !sigma.is_identity() {
        steps.push(Step::Permute(sigma.clone()));
    }
    Word::new(steps)
}

/// Minimum number of fresh points used to certify a trivial word.
pub const MIN_FRESH_POINTS: usize = 20;

struct Search<'a, R: Rng + ?Sized> {
    start: &'a Feed,
    kind: SeedKind,
    samples: usize,
    fresh: usize,
    polygons: Vec<((Vec<usize>, Permutation), KnownGenerator)>,
    perms: Vec<Permutation>,
    rng: &'a mut R,
    found: Vec<TrivialWord>,
}

impl<R: Rng + ?Sized> Search<'_, R> {
    fn certify(&mut self, word: &Word) -> Result<bool> {
        if !is_trivial_at_points(self.start, word, self.kind, self.samples, self.rng)? {
            return Ok(false);
        }
        // fresh points, drawn after the search points
        if !is_trivial_at_points(self.start, word, self.kind, self.fresh, self.rng)? {
            return Ok(false);
        }
        Ok(true)
    }

    fn certificate(&self) -> Certificate {
        Certificate {
            method: "exact evaluation at random positive rational points (probabilistic)".into(),
            search_points: self.samples,
            fresh_points: self.fresh,
        }
    }

    fn dfs(&mut self, muts: &mut Vec<usize>, feed: &Feed, max_len: usize, prefix_trivial: bool) -> Result<()> {
        let mut here_trivial = false;
        if !muts.is_empty() {
            for sigma in self.perms.clone() {
                let len = muts.len() + usize::from(!sigma.is_identity());
                if len > max_len || feed.permute(&sigma)? != *self.start {
                    continue;
                }
                let word = word_from(muts, &sigma);
                if self.certify(&word)? {
                    here_trivial = true;
                    let key = (muts.clone(), sigma.clone());
                    let known = self
                        .polygons
                        .iter()
                        .find(|(nf, _)| *nf == key)
                        .map(|(_, g)| g.clone())
                        .unwrap_or(KnownGenerator::Unmatched);
                    self.found.push(TrivialWord {
                        word: word.to_string(),
                        length: len,
                        primitive: !prefix_trivial,
                        known,
                        certificate: self.certificate(),
                    });
                }
            }
        }
        if muts.len() == max_len {
            return Ok(());
        }
        for k in 0..feed.n() {
            if muts.last() == Some(&k) {
                continue;
            }
            muts.push(k);
            let next = feed.mutate(k)?;
            self.dfs(muts, &next, max_len, prefix_trivial || here_trivial)?;
            muts.pop();
        }
        Ok(())
    }
}

/// Exhaustive search for trivial words of length at most `max_len`.
pub fn find_trivial_words<R: Rng + ?Sized>(
    feed: &Feed,
    max_len: usize,
    kind: SeedKind,
    samples: usize,
    rng: &mut R,
) -> Result<TrivialSearch> {
    let n = feed.n();
    if n > 4 {
        return Err(Error::Config(format!("trivial-word search is limited to rank 4, got {n}")));
    }
    let mut polygons = Vec::new();
    let mut literal = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some(t) = feed.rank2_classify(i, j)? {
                let w = Word::polygon(n, i, j, t.h() + 2)?;
                let g = KnownGenerator::Polygon { i, j, rank2: t };
                polygons.push((normal_form(&w, n), g.clone()));
                literal.push((w, g));
            }
        }
    }
    for k in 0..n {
        let w = Word::new(vec![Step::Mutate(k), Step::Mutate(k)]);
        literal.push((w, KnownGenerator::Involution { k }));
    }
    let fresh = MIN_FRESH_POINTS.max(samples);
    let mut search = Search {
        start: feed,
        kind,
        samples,
        fresh,
        polygons,
        perms: Permutation::all(n),
        rng,
        found: Vec::new(),
    };
    let mut generators = Vec::new();
    for (w, g) in literal {
        if search.certify(&w)? {
            generators.push(TrivialWord {
                word: w.to_string(),
                length: w.len(),
                primitive: true,
                known: g,
                certificate: search.certificate(),
            });
        }
    }
    search.dfs(&mut Vec::new(), feed, max_len, false)?;
    let mut found = search.found;
    found.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    Ok(TrivialSearch {
        kind,
        max_len,
        found,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn a2_sign_classes_share_a_fingerprint() {
        let neg = Feed::skew(vec![vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(fingerprint(&a2()).unwrap(), fingerprint(&neg).unwrap());
        let g = explore(&a2(), 10).unwrap();
        assert!(g.closed);
        assert_eq!(g.nodes.len(), 1);
    }

    #[test]
    fn zero_feed_is_a_single_node() {
        let g = explore(&Feed::zero(3), 5).unwrap();
        assert!(g.closed);
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn markov_feed_is_mutation_invariant() {
        let m = Feed::skew(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
        let g = explore(&m, 8).unwrap();
        assert!(g.closed);
        assert_eq!(g.nodes.len(), 1);
    }

    #[test]
    fn a3_and_b2_have_finite_classes() {
        let a3 = Feed::skew(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let g = explore(&a3, 10).unwrap();
        assert!(g.closed);
        // the A3 quivers: linear oriented, linear alternating, oriented 3-cycle
        assert_eq!(g.nodes.len(), 4);
        let b2 = Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap();
        assert!(explore(&b2, 10).unwrap().closed);
    }

    #[test]
    fn kronecker_grows_without_bound() {
        let k = Feed::skew(vec![vec![0, 3], vec![-3, 0]]).unwrap();
        let g = explore(&k, 1).unwrap();
        assert_eq!(g.nodes.len(), 1);
        let a = Feed::skew(vec![vec![0, 1, 1], vec![-1, 0, 3], vec![-1, -3, 0]]).unwrap();
        let g = explore(&a, 4).unwrap();
        assert!(!g.closed);
    }

    #[test]
    fn dot_export_lists_nodes_and_edges() {
        let g = explore(&a2(), 3).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph mutations {"));
        assert_eq!(dot.matches("->").count(), g.edges.len());
        assert!(g.report().contains("closed: true"));
    }

    #[test]
    fn normal_form_of_polygon() {
        let w = Word::polygon(2, 0, 1, 5).unwrap();
        let (m, s) = normal_form(&w, 2);
        assert_eq!(m, vec![0, 1, 0, 1, 0]);
        assert_eq!(s, Permutation::transposition(2, 0, 1).unwrap());
    }

    #[test]
    fn a2_trivial_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = find_trivial_words(&a2(), 10, SeedKind::A, 3, &mut rng).unwrap();
        let gens: Vec<&str> = r.generators.iter().map(|w| w.word.as_str()).collect();
        assert!(gens.contains(&"m1 m1") && gens.contains(&"m2 m2"));
        assert!(gens.contains(&"m1 p(1 2) m1 p(1 2) m1 p(1 2) m1 p(1 2) m1 p(1 2)"));
        let primitive: Vec<&TrivialWord> = r.found.iter().filter(|w| w.primitive).collect();
        assert_eq!(primitive.len(), 2);
        for w in &primitive {
            assert_eq!(w.length, 6);
            assert!(matches!(w.known, KnownGenerator::Polygon { rank2: Rank2Type::A2, .. }));
        }
        assert!(r.found.iter().all(|w| w.length >= 6));
    }

    #[test]
    fn a1xa1_commuting_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = find_trivial_words(&Feed::zero(2), 4, SeedKind::X, 2, &mut rng).unwrap();
        assert_eq!(r.found.len(), 2);
        for w in &r.found {
            assert_eq!(w.length, 4);
            assert!(matches!(w.known, KnownGenerator::Polygon { rank2: Rank2Type::A1xA1, .. }));
        }
    }
}
