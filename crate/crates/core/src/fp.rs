//! Finitely presented groups and HLT coset enumeration.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{Elem, FiniteGroup, Group};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    /// Column of the coset table for this letter.
    #[inline]
    fn column(self) -> usize {
        2 * self.generator + self.inverse as usize
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverted()).collect()
}

/// Cancels adjacent `a a^-1` pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction; a relator and its cyclic reduction define the same normal closure.
pub fn cyclically_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inverted() {
        w.pop();
        w.remove(0);
    }
    w
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("coset enumeration overflowed {0} cosets (group may be infinite or the bound too small)")]
    Overflow(usize),
    #[error("enumeration was not over the trivial subgroup")]
    NotRegular,
    #[error("generator index {0} is out of range")]
    BadGenerator(usize),
    #[error("unknown generator name {0:?}")]
    UnknownName(String),
    #[error("max_cosets must be at least 1")]
    ZeroBound,
}

/// A finitely presented group `<generators | relators>`.
#[derive(Clone, Debug)]
pub struct FpGroup {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl FpGroup {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, FpError> {
        let k = generator_names.len();
        if let Some(l) = relators.iter().flatten().find(|l| l.generator >= k) {
            return Err(FpError::BadGenerator(l.generator));
        }
        Ok(FpGroup { generator_names, relators })
    }

    /// Relators written as whitespace-separated generator names, `'` marking inverses.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, FpError> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| parse_word(&names, r))
            .collect::<Result<Vec<_>, _>>()?;
        FpGroup::new(names, rels)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, FpError> {
        parse_word(&self.generator_names, s)
    }

    /// Human-readable word; multi-character names are parenthesised and runs collapsed to powers.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let wrap = self.generator_names.iter().any(|n| n.chars().count() > 1);
        let mut out = String::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.generator_names[w[i].generator];
            let base = if wrap { format!("({name})") } else { name.clone() };
            let exp = (j - i) as i64 * if w[i].inverse { -1 } else { 1 };
            if !wrap && !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&base);
            if exp != 1 {
                out.push_str(&format!("^{exp}"));
            }
            i = j;
        }
        out
    }
}

/// Parses whitespace-separated tokens `x`, `x'` (inverse) or `x^k` (`k` may be negative).
pub fn parse_word(names: &[String], s: &str) -> Result<Word, FpError> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (stem, exp) = match tok.rsplit_once('^') {
            Some((stem, e)) => (stem, e.parse::<i64>().map_err(|_| FpError::UnknownName(tok.to_string()))?),
            None => match tok.strip_suffix('\'') {
                Some(stem) => (stem, -1),
                None => (tok, 1),
            },
        };
        let generator = names
            .iter()
            .position(|n| n == stem)
            .ok_or_else(|| FpError::UnknownName(tok.to_string()))?;
        let letter = Letter { generator, inverse: exp < 0 };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(out)
}

/// Counters from an enumeration run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Total number of coset definitions.
    pub defined: usize,
    /// Largest number of simultaneously live cosets.
    pub max_live: usize,
    pub coincidences: usize,
}

/// A closed coset table, standardised by breadth-first discovery from coset 0.
#[derive(Clone, Debug)]
pub struct CosetTable {
    presentation: FpGroup,
    columns: usize,
    rows: Vec<u32>,
    live_count: usize,
    subgroup_trivial: bool,
    stats: EnumerationStats,
}

impl CosetTable {
    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn presentation(&self) -> &FpGroup {
        &self.presentation
    }

    pub fn stats(&self) -> &EnumerationStats {
        &self.stats
    }

    /// Coset reached from `c` by the letter.
    #[inline]
    pub fn image(&self, c: usize, l: Letter) -> usize {
        self.rows[c * self.columns + l.column()] as usize
    }

    pub fn trace(&self, start: usize, w: &[Letter]) -> usize {
        w.iter().fold(start, |c, &l| self.image(c, l))
    }

    /// Shortest-word representatives of every coset, in breadth-first order.
    fn coset_words(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.live_count];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let base = words[c].clone().expect("visited");
            for col in 0..self.columns {
                let l = Letter { generator: col / 2, inverse: col % 2 == 1 };
                let d = self.image(c, l);
                if words[d].is_none() {
                    let mut w = base.clone();
                    w.push(l);
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        words.into_iter().map(|w| w.expect("table is connected")).collect()
    }

    /// Builds the group on the cosets via the regular representation.
    pub fn to_group(&self) -> Result<RegularGroup, FpError> {
        if !self.subgroup_trivial {
            return Err(FpError::NotRegular);
        }
        let n = self.live_count;
        let words = self.coset_words();
        // d * c = trace of c's word from d
        let mut flat = vec![0u32; n * n];
        for d in 0..n {
            for (c, w) in words.iter().enumerate() {
                flat[d * n + c] = self.trace(d, w) as u32;
            }
        }
        // regular iff (d * c) x = d * (c x) for every generator x
        for c in 0..n {
            for g in 0..self.presentation.generator_count() {
                let cx = self.image(c, Letter::gen(g));
                for d in 0..n {
                    let lhs = self.image(flat[d * n + c] as usize, Letter::gen(g));
                    if lhs != flat[d * n + cx] as usize {
                        return Err(FpError::NotRegular);
                    }
                }
            }
        }
        let names = words.iter().map(|w| self.presentation.format_word(w)).collect();
        let gens: Vec<Elem> = (0..self.presentation.generator_count())
            .map(|g| self.image(0, Letter::gen(g)))
            .collect();
        let mut distinguished: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        distinguished.sort_unstable();
        distinguished.dedup();
        let group = FiniteGroup::from_trusted(n, flat, 0)
            .with_names(names)
            .with_generators(distinguished);
        Ok(RegularGroup {
            group: Arc::new(group),
            generator_images: gens,
            words,
            table: self.clone(),
        })
    }
}

/// A finite group realised from a closed coset table over the trivial subgroup.
#[derive(Clone, Debug)]
pub struct RegularGroup {
    pub group: Group,
    /// Element represented by each generator.
    pub generator_images: Vec<Elem>,
    /// Breadth-first word for each element.
    pub words: Vec<Word>,
    table: CosetTable,
}

impl RegularGroup {
    pub fn evaluate(&self, w: &[Letter]) -> Elem {
        self.table.trace(0, w)
    }

    pub fn coset_table(&self) -> &CosetTable {
        &self.table
    }
}

const NONE: u32 = u32::MAX;

struct Enumerator {
    columns: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max: usize,
    stats: EnumerationStats,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(columns: usize, max: usize) -> Self {
        Enumerator {
            columns,
            table: vec![NONE; columns],
            parent: vec![0],
            live: 1,
            max,
            stats: EnumerationStats { defined: 1, max_live: 1, coincidences: 0 },
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.columns + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, v: u32) {
        self.table[c * self.columns + col] = v;
    }

    #[inline]
    fn alive(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize, FpError> {
        let new = self.allocated();
        if new >= self.max {
            return Err(FpError::Overflow(self.max));
        }
        self.parent.push(new as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.columns));
        self.set(c, col, new as u32);
        self.set(new, col ^ 1, c as u32);
        self.live += 1;
        self.stats.defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        Ok(new)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[drop] = keep as u32;
            self.queue.push(drop);
            self.live -= 1;
            self.stats.coincidences += 1;
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let gamma = self.queue[i];
            i += 1;
            for col in 0..self.columns {
                let delta = self.get(gamma, col);
                if delta == NONE {
                    continue;
                }
                let delta = delta as usize;
                self.set(delta, col ^ 1, NONE);
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                let mu_x = self.get(mu, col);
                if mu_x != NONE {
                    self.merge(nu, mu_x as usize);
                } else {
                    let nu_xi = self.get(nu, col ^ 1);
                    if nu_xi != NONE {
                        self.merge(mu, nu_xi as usize);
                    } else {
                        self.set(mu, col, nu as u32);
                        self.set(nu, col ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    /// Scans `word` at `alpha`, defining cosets to complete it.
    fn scan_and_fill(&mut self, alpha: usize, word: &[usize]) -> Result<(), FpError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut i = 0usize;
        let mut b = alpha;
        let mut j = word.len() - 1;
        loop {
            // forward
            while i <= j {
                let next = self.get(f, word[i]);
                if next == NONE {
                    break;
                }
                f = next as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            // backward
            while j >= i {
                let prev = self.get(b, word[j] ^ 1);
                if prev == NONE {
                    break;
                }
                b = prev as usize;
                if j == 0 {
                    // i <= j == 0 means the whole word was traced backwards
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                // deduction
                self.set(f, word[i], b as u32);
                self.set(b, word[i] ^ 1, f as u32);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    /// Renumbers live cosets consecutively, preserving order. Returns the new index of `keep`.
    fn compact(&mut self, keep: usize) -> usize {
        let n = self.allocated();
        let mut newnum = vec![NONE; n];
        let mut count = 0u32;
        for c in 0..n {
            if self.alive(c) {
                newnum[c] = count;
                count += 1;
            }
        }
        let mut table = Vec::with_capacity(count as usize * self.columns);
        for c in 0..n {
            if !self.alive(c) {
                continue;
            }
            for col in 0..self.columns {
                let v = self.get(c, col);
                table.push(if v == NONE { NONE } else { newnum[v as usize] });
            }
        }
        self.table = table;
        self.parent = (0..count).collect();
        newnum[keep] as usize
    }
}

/// HLT enumeration of the cosets of `<subgroup>` in `P`.
///
/// `max_cosets` bounds the number of coset rows held at once; dead rows are
/// reclaimed by compaction between passes.
pub fn todd_coxeter(p: &FpGroup, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, FpError> {
    if max_cosets == 0 {
        return Err(FpError::ZeroBound);
    }
    let columns = 2 * p.generator_count();
    let relators: Vec<Vec<usize>> = {
        let rs: Vec<Word> = p
            .relators()
            .iter()
            .map(|r| cyclically_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        let mut cols: Vec<Vec<usize>> = rs.iter().map(|r| r.iter().map(|l| l.column()).collect()).collect();
        cols.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cols.dedup();
        cols
    };
    let subgroup_cols: Vec<Vec<usize>> = subgroup
        .iter()
        .map(|w| free_reduce(w))
        .filter(|w| !w.is_empty())
        .map(|w| w.iter().map(|l| l.column()).collect())
        .collect();
    for w in subgroup.iter().flatten() {
        if w.generator >= p.generator_count() {
            return Err(FpError::BadGenerator(w.generator));
        }
    }

    let mut e = Enumerator::new(columns, max_cosets);
    for w in &subgroup_cols {
        e.scan_and_fill(0, w)?;
    }
    let mut alpha = 0;
    while alpha < e.allocated() {
        if e.alive(alpha) {
            for r in &relators {
                e.scan_and_fill(alpha, r)?;
                if !e.alive(alpha) {
                    break;
                }
            }
            if e.alive(alpha) {
                for col in 0..columns {
                    if e.get(alpha, col) == NONE {
                        e.define(alpha, col)?;
                    }
                }
            }
        }
        alpha += 1;
        let dead = e.allocated() - e.live;
        if dead > 0 && (dead > e.live || e.allocated() * 4 > max_cosets * 3) {
            // keep the scan position: alpha is the next row to visit
            let next_live = (alpha..e.allocated()).find(|&c| e.alive(c));
            match next_live {
                Some(c) => alpha = e.compact(c),
                None => {
                    let len = e.live;
                    e.compact(0);
                    alpha = len;
                }
            }
        }
    }
    e.compact(0);
    let live = e.live;
    // breadth-first standardisation
    let mut order = vec![NONE; live];
    let mut seq = vec![0usize];
    order[0] = 0;
    let mut k = 0;
    while k < seq.len() {
        let c = seq[k];
        for col in 0..columns {
            let d = e.get(c, col) as usize;
            if order[d] == NONE {
                order[d] = seq.len() as u32;
                seq.push(d);
            }
        }
        k += 1;
    }
    let mut rows = vec![0u32; live * columns];
    for (new, &old) in seq.iter().enumerate() {
        for col in 0..columns {
            rows[new * columns + col] = order[e.get(old, col) as usize];
        }
    }
    Ok(CosetTable {
        presentation: p.clone(),
        columns,
        rows,
        live_count: live,
        subgroup_trivial: subgroup_cols.is_empty(),
        stats: e.stats,
    })
}

/// Enumerates over the trivial subgroup and realises the group.
pub fn enumerate_group(p: &FpGroup, max_cosets: usize) -> Result<RegularGroup, FpError> {
    todd_coxeter(p, &[], max_cosets)?.to_group()
}

impl fmt::Display for FpGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "<{} | {}>", self.generator_names.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelian_invariants, abelianization};

    fn dihedral_presentation(n: usize) -> FpGroup {
        let yn = vec!["y"; n].join(" ");
        FpGroup::parse(&["x", "y"], &["x x", &yn, "x y x y"]).unwrap()
    }

    #[test]
    fn z2() {
        let p = FpGroup::parse(&["x"], &["x x"]).unwrap();
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert_eq!(t.live_count(), 2);
        let g = t.to_group().unwrap();
        assert_eq!(g.group.order(), 2);
        let w = p.parse_word("x x'").unwrap();
        assert_eq!(g.evaluate(&w), g.group.identity());
    }

    #[test]
    fn power_tokens() {
        let p = FpGroup::parse(&["a", "b"], &["a^4", "b^-2 a^2"]).unwrap();
        assert_eq!(p.relators()[0], vec![Letter::gen(0); 4]);
        assert_eq!(p.relators()[1], vec![Letter::inv(1), Letter::inv(1), Letter::gen(0), Letter::gen(0)]);
        assert!(p.parse_word("a^x").is_err());
        assert!(p.parse_word("c").is_err());
    }

    #[test]
    fn dihedral_orders() {
        for n in 1..=8 {
            let t = todd_coxeter(&dihedral_presentation(n), &[], 10_000).unwrap();
            assert_eq!(t.live_count(), 2 * n, "D_{n}");
        }
    }

    #[test]
    fn infinite_cyclic_overflows() {
        let p = FpGroup::parse(&["x"], &[]).unwrap();
        assert_eq!(todd_coxeter(&p, &[], 100).unwrap_err(), FpError::Overflow(100));
    }

    #[test]
    fn subgroup_index() {
        let p = dihedral_presentation(4);
        let y = p.parse_word("y").unwrap();
        let t = todd_coxeter(&p, &[y], 1000).unwrap();
        assert_eq!(t.live_count(), 2);
        assert_eq!(t.to_group().unwrap_err(), FpError::NotRegular);
    }

    #[test]
    fn d4_abelianization() {
        let g = enumerate_group(&dihedral_presentation(4), 1000).unwrap();
        let (ab, _) = abelianization(&g.group);
        assert_eq!(abelian_invariants(&ab).unwrap(), vec![2, 2]);
        for r in dihedral_presentation(4).relators() {
            assert_eq!(g.evaluate(r), g.group.identity());
        }
    }

    #[test]
    fn word_formatting() {
        let p = FpGroup::parse(&["x", "y"], &[]).unwrap();
        let w = p.parse_word("x y y y'").unwrap();
        assert_eq!(p.format_word(&w), "x y^2 y^-1");
        assert_eq!(p.format_word(&free_reduce(&w)), "x y");
        let q = FpGroup::new(vec!["a⊗b".into()], vec![]).unwrap();
        assert_eq!(q.format_word(&[Letter::gen(0), Letter::gen(0)]), "(a⊗b)^2");
    }
}
