use std::path::Path;

use clusterq::affine::{build_residual_word_variant, builtin_suite, Relation, ResidualWord, SuiteCase, WordVariant};
use clusterq::classical::apply_word_to_feed;
use clusterq::explorer::{explore as explore_graph, find_trivial_words};
use clusterq::format::{builtin_feed, parse_seed_json, SeedFile};
use clusterq::qdilog::{
    check_detour, check_duality, check_functional_equations, check_involutivity, check_ratio_relation,
    check_shift_products, check_unitarity, in_strip, phi_continue, phi_eval, real_samples, DilogConfig, Residual,
};
use clusterq::rep::{check_b_conjugation, verify_x_conjugation, Flavor};
use clusterq::series::{
    check_conjugation_form, check_double_splitting, check_functional_equation, check_hexagon, check_octagon,
    check_pentagon, check_triple_splitting, PentagonMiddle, SeriesOrder, SeriesReport,
};
use clusterq::{Error, Feed, Result, Seed, SeedKind, Word};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Outcome;
use crate::{ExploreArgs, Identity, Kind, PhaseArgs, SeriesArgs, Suite};

/// A built-in name, a JSON file, or inline JSON.
fn load_seed(src: &str) -> Result<Seed> {
    if let Some(f) = builtin_feed(src) {
        return Ok(Seed::with_default_labels(f, SeedKind::A));
    }
    if Path::new(src).is_file() {
        let text = std::fs::read_to_string(src).map_err(|e| Error::Config(format!("{src}: {e}")))?;
        return parse_seed_json(&text);
    }
    if src.trim_start().starts_with('{') {
        return parse_seed_json(src);
    }
    Err(Error::Config(format!(
        "feed '{src}' is not a file, a JSON object, or a built-in name"
    )))
}

fn load_feed(src: &str) -> Result<Feed> {
    Ok(load_seed(src)?.feed)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn mutate(feed: &str, word: &str) -> Result<Outcome> {
    let seed = load_seed(feed)?;
    let w = Word::parse(word, seed.feed.n())?;
    let out = apply_word_to_feed(&seed.feed, &w)?;
    let mut o = Outcome::new("mutate");
    let back = out == seed.feed;
    o.line(format!("input: {}", seed.feed));
    o.line(format!("word: {w}"));
    o.line(format!("output: {out}"));
    o.line(format!("returns_to_input: {back}"));
    let result = Seed::with_default_labels(out, seed.kind);
    o.body = json!({
        "input": to_json(&SeedFile::from_seed(&seed)),
        "word": w.to_string(),
        "output": to_json(&SeedFile::from_seed(&result)),
        "returns_to_input": back,
    });
    Ok(o)
}

fn parse_pair(s: &str, n: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let idx = |t: &str| -> Result<usize> {
        let v: usize = t.parse().map_err(|_| Error::Parse(format!("bad index '{t}'")))?;
        if v == 0 || v > n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
        Ok(v - 1)
    };
    match parts.as_slice() {
        [a] => Ok((idx(a)?, idx(a)?)),
        [a, b] => Ok((idx(a)?, idx(b)?)),
        _ => Err(Error::Parse(format!("pair '{s}' should look like 'i,j'"))),
    }
}

fn parse_relation(s: &str) -> Result<Relation> {
    Relation::parse(s).ok_or_else(|| Error::Config(format!("unknown relation '{s}'")))
}

fn feed_cases(feed: &Feed, a: &PhaseArgs) -> Result<Vec<SuiteCase>> {
    let n = feed.n();
    let case = |relation, i, j| SuiteCase {
        label: "custom".into(),
        relation,
        feed: feed.clone(),
        i,
        j,
    };
    let mut out = Vec::new();
    match (&a.relation, &a.pair) {
        (Some(r), Some(p)) => {
            let (i, j) = parse_pair(p, n)?;
            out.push(case(parse_relation(r)?, i, j));
        }
        (Some(r), None) if parse_relation(r)? == Relation::A1 => {
            out.extend((0..n).map(|k| case(Relation::A1, k, k)));
        }
        (Some(_), None) => return Err(Error::Config("rank-2 relations on a feed need --pair i,j".into())),
        (None, _) if a.all => {
            out.extend((0..n).map(|k| case(Relation::A1, k, k)));
            for i in 0..n {
                for j in 0..n {
                    if let Some(t) = feed.rank2_classify(i, j)? {
                        out.push(case(Relation::Rank2(t), i, j));
                    }
                }
            }
        }
        (None, _) => return Err(Error::Config("give --relation or --all with --feed".into())),
    }
    Ok(out)
}

fn word_text(w: &ResidualWord) -> String {
    w.factors
        .iter()
        .map(|f| f.provenance.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn phase_check(a: &PhaseArgs) -> Result<Outcome> {
    let cases = match &a.feed {
        Some(src) => feed_cases(&load_feed(src)?, a)?,
        None => {
            let filter = a.relation.as_deref().map(parse_relation).transpose()?;
            builtin_suite()
                .into_iter()
                .filter(|c| filter.is_none_or(|r| r == c.relation))
                .collect()
        }
    };
    if cases.is_empty() {
        return Err(Error::Config("no cases selected".into()));
    }
    let variant = if a.literal { WordVariant::Literal } else { WordVariant::Derived };
    let mut o = Outcome::new("phase-check");
    let mut rows = Vec::new();
    for c in &cases {
        let mut word = build_residual_word_variant(c.relation, &c.feed, c.i, c.j, variant)?;
        if a.negative_control {
            word.factors.pop();
        }
        let composed = word.compose(c.feed.n())?;
        let identity = composed.is_identity();
        o.pass &= identity;
        o.line(format!(
            "{} {} pair=({},{}) n={}: {}",
            c.relation,
            c.label,
            c.i + 1,
            c.j + 1,
            c.feed.n(),
            if identity { "identity".to_string() } else { format!("NOT identity, composed {composed}") }
        ));
        o.line(format!("  word: {}", word_text(&word)));
        rows.push(json!({
            "relation": c.relation.to_string(),
            "label": c.label,
            "pair": [c.i + 1, c.j + 1],
            "feed": to_json(&SeedFile::from_feed(&c.feed)),
            "word": word_text(&word),
            "identity": identity,
            "composed": composed.to_string(),
        }));
    }
    o.body = json!({
        "variant": if a.literal { "literal" } else { "derived" },
        "negative_control": a.negative_control,
        "cases": rows,
    });
    Ok(o)
}

fn series_line(o: &mut Outcome, r: &SeriesReport) -> Value {
    let c = &r.comparison;
    o.pass &= r.holds();
    o.line(format!(
        "{}: z-order {} q-cutoff {}: {} compared, {} excluded, {} mismatches",
        r.name,
        r.order.z,
        r.order.q,
        c.compared,
        c.excluded,
        c.mismatches.len()
    ));
    for (e, a, b) in c.mismatches.iter().take(5) {
        o.line(format!("  mismatch at q^{e}: {a} vs {b}"));
    }
    json!({
        "name": r.name,
        "z_order": r.order.z,
        "q_cutoff": r.order.q,
        "compared": c.compared,
        "excluded": c.excluded,
        "mismatches": c.mismatches.len(),
        "holds": r.holds(),
    })
}

pub fn series_check(a: &SeriesArgs) -> Result<Outcome> {
    let z = a.order.unwrap_or(match a.identity {
        Identity::Pentagon | Identity::PentagonQxy => 6,
        Identity::Hexagon | Identity::Conjugation => 4,
        Identity::Octagon => 3,
        Identity::Functional => 8,
    });
    let order = SeriesOrder::new(z, a.qcutoff);
    let reports = match a.identity {
        Identity::Pentagon => vec![check_pentagon(PentagonMiddle::QInvXY, order)?],
        Identity::PentagonQxy => vec![check_pentagon(PentagonMiddle::QXY, order)?],
        Identity::Hexagon => vec![check_double_splitting(order)?, check_hexagon(order)?],
        Identity::Octagon => vec![check_triple_splitting(order)?, check_octagon(order)?],
        Identity::Functional => vec![check_functional_equation(order)?],
        Identity::Conjugation => {
            let src = a
                .feed
                .as_deref()
                .ok_or_else(|| Error::Config("the conjugation identity needs --feed".into()))?;
            let feed = load_feed(src)?;
            let mut all = Vec::new();
            for k in 0..feed.n() {
                for mut r in check_conjugation_form(&feed, k, order)? {
                    r.name = format!("mutation {}: {}", k + 1, r.name);
                    all.push(r);
                }
            }
            all
        }
    };
    let mut o = Outcome::new("series-check");
    let rows: Vec<Value> = reports.iter().map(|r| series_line(&mut o, r)).collect();
    o.body = json!({ "reports": rows });
    Ok(o)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| -> Result<f64> { t.parse().map_err(|_| Error::Parse(format!("bad number '{t}'"))) };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("'{s}' should look like 're,im'"))),
    }
}

pub fn qdilog_eval(hbar: f64, z: &str, tol: f64) -> Result<Outcome> {
    let cfg = DilogConfig { tol, ..DilogConfig::with_hbar(hbar) };
    cfg.validate()?;
    let z = parse_complex(z)?;
    let h = Complex64::new(hbar, 0.0);
    let method = if in_strip(h, z) { "integral" } else { "continued" };
    let value = if in_strip(h, z) { phi_eval(&cfg, z) } else { phi_continue(&cfg, z) };
    let mut o = Outcome::new("qdilog eval");
    o.line(format!("hbar: {hbar}"));
    o.line(format!("z: {} {:+}i", z.re, z.im));
    match value {
        Ok(v) => {
            o.line(format!("method: {method}"));
            o.line(format!("value: {:.15e} {:+.15e}i", v.re, v.im));
            o.line(format!("abs: {:.15e}", v.norm()));
            o.body = json!({ "hbar": hbar, "z": [z.re, z.im], "method": method, "value": [v.re, v.im] });
        }
        Err(Error::NearPole(msg)) => {
            o.pass = false;
            o.line(format!("near a pole: {msg}"));
            o.body = json!({ "hbar": hbar, "z": [z.re, z.im], "pole": true });
        }
        Err(e) => return Err(e),
    }
    Ok(o)
}

pub fn qdilog_check(suite: Suite, hbar: f64, samples: usize, tol: f64) -> Result<Outcome> {
    let cfg = DilogConfig { tol, ..DilogConfig::with_hbar(hbar) };
    cfg.validate()?;
    if samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    let zs = [
        Complex64::new(0.3, 0.0),
        Complex64::new(-1.7, 0.8),
        Complex64::new(2.2, -1.5),
        Complex64::new(0.0, 2.5),
    ];
    let xs = real_samples(samples.min(9), 3.0);
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut rs: Vec<Residual> = Vec::new();
    if want(Suite::Unitarity) {
        rs.push(check_unitarity(&cfg, &real_samples(samples, 8.0))?);
    }
    if want(Suite::Involutivity) {
        rs.push(check_involutivity(&cfg, &zs)?);
    }
    if want(Suite::Duality) {
        rs.push(check_duality(&cfg, &zs)?);
    }
    if want(Suite::Functional) {
        rs.push(check_functional_equations(&cfg, &xs)?);
    }
    if want(Suite::Shifts) {
        for m in [-3, -2, -1, 1, 2, 3] {
            rs.push(check_shift_products(&cfg, m, &real_samples(3, 1.5))?);
        }
    }
    if want(Suite::Detour) {
        let (d, p) = check_detour(&cfg, &zs)?;
        rs.push(d);
        rs.push(p);
    }
    if want(Suite::Ratio) {
        let h = Complex64::new(0.4, 0.3);
        let mut worst: f64 = 0.0;
        for z in [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-0.6, 0.4)] {
            worst = worst.max(check_ratio_relation(&cfg, h, z)?);
        }
        rs.push(Residual {
            name: "ratio relation (h = 0.4+0.3i)".into(),
            samples: 3,
            max_residual: worst,
            tol: tol.max(1e-6),
        });
    }
    let mut o = Outcome::new("qdilog check");
    o.line(format!("hbar: {hbar}"));
    o.line(format!("{:<34} {:>7} {:>12} {:>8}  verdict", "check", "points", "residual", "tol"));
    for r in &rs {
        o.pass &= r.passes();
        o.line(format!(
            "{:<34} {:>7} {:>12.3e} {:>8.0e}  {}",
            r.name,
            r.samples,
            r.max_residual,
            r.tol,
            if r.passes() { "PASS" } else { "FAIL" }
        ));
    }
    o.body = json!({ "hbar": hbar, "residuals": to_json(&rs) });
    Ok(o)
}

pub fn rep_check(feed: &str, k: Option<usize>) -> Result<Outcome> {
    let feed = load_feed(feed)?;
    let n = feed.n();
    let ks: Vec<usize> = match k {
        Some(k) if k == 0 || k > n => return Err(Error::IndexOutOfRange { index: k, n }),
        Some(k) => vec![k - 1],
        None => (0..n).collect(),
    };
    let mut o = Outcome::new("rep-check");
    o.line(format!("feed: {feed}"));
    let mut rows = Vec::new();
    for &k in &ks {
        let b_old = check_b_conjugation(&feed, k, Flavor::Old)?.holds();
        let b_new = check_b_conjugation(&feed, k, Flavor::New)?.holds();
        let x = verify_x_conjugation(&feed, k)?;
        let row_zero = (0..n).all(|j| feed.eps(k, j) == 0);
        // the old flavor must pass; the new one fails exactly when row k is nonzero
        let expected = b_old && b_new && x.old && x.new == row_zero;
        o.pass &= expected;
        o.line(format!(
            "k={}: b-conjugation old={b_old} new={b_new}; x-conjugation old={} new={}; row k zero={row_zero}",
            k + 1,
            x.old,
            x.new
        ));
        for (label, i, d) in &x.new_failures {
            o.line(format!("  new flavor fails: {label}{} residual {d}", i + 1));
        }
        rows.push(json!({
            "k": k + 1,
            "b_old": b_old,
            "b_new": b_new,
            "x_old": x.old,
            "x_new": x.new,
            "row_zero": row_zero,
            "new_failures": x.new_failures.iter()
                .map(|(l, i, d)| json!({"op": format!("{l}{}", i + 1), "residual": d.to_string()}))
                .collect::<Vec<_>>(),
        }));
    }
    o.body = json!({ "feed": to_json(&SeedFile::from_feed(&feed)), "mutations": rows });
    Ok(o)
}

pub fn explore(a: &ExploreArgs, seed: u64) -> Result<Outcome> {
    let feed = load_feed(&a.feed)?;
    let g = explore_graph(&feed, a.depth)?;
    let mut o = Outcome::new("explore");
    for l in g.report().lines() {
        o.line(l);
    }
    let mut body = json!({ "graph": to_json(&g) });
    if a.dot {
        o.raw = Some(g.to_dot());
        body["dot"] = json!(g.to_dot());
    }
    if a.trivial_words {
        let kind = match a.kind {
            Kind::A => SeedKind::A,
            Kind::X => SeedKind::X,
            Kind::D => SeedKind::D,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = find_trivial_words(&feed, a.max_len, kind, a.samples, &mut rng)?;
        o.line(format!("trivial words ({kind}-seed, length <= {}):", a.max_len));
        for w in t.generators.iter().chain(&t.found) {
            o.line(format!(
                "  {} | length {} | primitive {} | {:?} | certified at {} fresh points (probabilistic)",
                w.word, w.length, w.primitive, w.known, w.certificate.fresh_points
            ));
        }
        body["trivial_words"] = to_json(&t);
    }
    o.body = body;
    Ok(o)
}
