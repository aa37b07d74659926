//! Gauss data of oriented twisted virtual doodle diagrams.
//!
//! A crossing has four endpoints: `1`, `2` incoming (left, right) and `3`, `4`
//! outgoing (right, left); the strand entering at `1` leaves at `3`, the one
//! entering at `2` leaves at `4`. A bar has endpoints `1` (in) and `2` (out).
//! Virtual crossings are not recorded, so diagrams that differ by virtual
//! moves have identical Gauss data.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, LetterKind, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SiteKind {
    Crossing,
    Bar,
}

/// A real crossing `c<id>` or a bar `b<id>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub kind: SiteKind,
    pub id: usize,
}

impl Site {
    pub const fn crossing(id: usize) -> Self {
        Site {
            kind: SiteKind::Crossing,
            id,
        }
    }

    pub const fn bar(id: usize) -> Self {
        Site {
            kind: SiteKind::Bar,
            id,
        }
    }

    /// Number of endpoints.
    pub fn arity(&self) -> u8 {
        match self.kind {
            SiteKind::Crossing => 4,
            SiteKind::Bar => 2,
        }
    }

    pub fn endpoint(&self, label: u8) -> Endpoint {
        debug_assert!((1..=self.arity()).contains(&label));
        Endpoint { site: *self, label }
    }

    pub fn incoming(&self) -> impl Iterator<Item = Endpoint> + '_ {
        let labels: &[u8] = match self.kind {
            SiteKind::Crossing => &[1, 2],
            SiteKind::Bar => &[1],
        };
        labels.iter().map(move |&l| self.endpoint(l))
    }

    pub fn outgoing(&self) -> impl Iterator<Item = Endpoint> + '_ {
        let labels: &[u8] = match self.kind {
            SiteKind::Crossing => &[3, 4],
            SiteKind::Bar => &[2],
        };
        labels.iter().map(move |&l| self.endpoint(l))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            SiteKind::Crossing => 'c',
            SiteKind::Bar => 'b',
        };
        write!(f, "{prefix}{}", self.id)
    }
}

impl FromStr for Site {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedGauss(format!("bad site id `{s}`"));
        let (kind, digits) = match s.split_at_checked(1) {
            Some(("c", d)) => (SiteKind::Crossing, d),
            Some(("b", d)) => (SiteKind::Bar, d),
            _ => return Err(bad()),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let id = digits.parse().map_err(|_| bad())?;
        Ok(Site { kind, id })
    }
}

/// One endpoint `site.label`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub site: Site,
    pub label: u8,
}

impl Endpoint {
    pub fn is_incoming(&self) -> bool {
        match self.site.kind {
            SiteKind::Crossing => self.label <= 2,
            SiteKind::Bar => self.label == 1,
        }
    }

    /// The other end of the through-strand.
    pub fn through(&self) -> Endpoint {
        let label = match (self.site.kind, self.label) {
            (SiteKind::Crossing, 1) => 3,
            (SiteKind::Crossing, 2) => 4,
            (SiteKind::Crossing, 3) => 1,
            (SiteKind::Crossing, _) => 2,
            (SiteKind::Bar, 1) => 2,
            (SiteKind::Bar, _) => 1,
        };
        Endpoint {
            site: self.site,
            label,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.site, self.label)
    }
}

impl FromStr for Endpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedGauss(format!("bad endpoint `{s}`"));
        let (site, label) = s.split_once('.').ok_or_else(bad)?;
        let site: Site = site.parse()?;
        let label: u8 = label.parse().map_err(|_| bad())?;
        if !(1..=site.arity()).contains(&label) {
            return Err(bad());
        }
        Ok(Endpoint { site, label })
    }
}

/// Crossings, bars, directed arcs from outgoing to incoming endpoints, and the
/// number of components. Components without crossings or bars are counted in
/// `components` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussData {
    crossings: BTreeSet<usize>,
    bars: BTreeSet<usize>,
    arcs: BTreeMap<Endpoint, Endpoint>,
    components: usize,
}

impl GaussData {
    pub fn new(
        crossings: impl IntoIterator<Item = usize>,
        bars: impl IntoIterator<Item = usize>,
        arcs: impl IntoIterator<Item = (Endpoint, Endpoint)>,
        components: usize,
    ) -> Result<Self> {
        let crossings: BTreeSet<usize> = crossings.into_iter().collect();
        let bars: BTreeSet<usize> = bars.into_iter().collect();
        let mut map = BTreeMap::new();
        for (from, to) in arcs {
            if map.insert(from, to).is_some() {
                return Err(Error::MalformedGauss(format!("{from} starts two arcs")));
            }
        }
        let g = GaussData {
            crossings,
            bars,
            arcs: map,
            components,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedGauss(m));
        let mut targets = HashSet::new();
        for (from, to) in &self.arcs {
            for e in [from, to] {
                if !self.contains_site(&e.site) {
                    return bad(format!("{e} refers to an unknown site"));
                }
            }
            if from.is_incoming() {
                return bad(format!("arc starts at incoming endpoint {from}"));
            }
            if !to.is_incoming() {
                return bad(format!("arc ends at outgoing endpoint {to}"));
            }
            if !targets.insert(*to) {
                return bad(format!("{to} ends two arcs"));
            }
        }
        for site in self.sites() {
            if let Some(e) = site.outgoing().find(|e| !self.arcs.contains_key(e)) {
                return bad(format!("{e} starts no arc"));
            }
        }
        let cycles = self.traversal_cycles();
        if cycles > self.components {
            return bad(format!(
                "{} components declared but arcs form {cycles} cycles",
                self.components
            ));
        }
        Ok(())
    }

    pub fn crossings(&self) -> &BTreeSet<usize> {
        &self.crossings
    }

    pub fn bars(&self) -> &BTreeSet<usize> {
        &self.bars
    }

    pub fn arcs(&self) -> &BTreeMap<Endpoint, Endpoint> {
        &self.arcs
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn contains_site(&self, site: &Site) -> bool {
        match site.kind {
            SiteKind::Crossing => self.crossings.contains(&site.id),
            SiteKind::Bar => self.bars.contains(&site.id),
        }
    }

    /// Crossings in id order, then bars in id order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.crossings
            .iter()
            .map(|&i| Site::crossing(i))
            .chain(self.bars.iter().map(|&i| Site::bar(i)))
    }

    pub fn site_count(&self) -> usize {
        self.crossings.len() + self.bars.len()
    }

    /// Incoming endpoint -> outgoing endpoint of the arc that ends there.
    pub fn sources(&self) -> BTreeMap<Endpoint, Endpoint> {
        self.arcs.iter().map(|(&a, &b)| (b, a)).collect()
    }

    /// Cycles formed by the arcs and the through-strands of sites.
    pub fn traversal_cycles(&self) -> usize {
        let mut seen = HashSet::new();
        let mut cycles = 0;
        for start in self.sites().flat_map(|s| s.incoming().collect::<Vec<_>>()) {
            if seen.contains(&start) {
                continue;
            }
            cycles += 1;
            let mut cur = start;
            while seen.insert(cur) {
                match self.arcs.get(&cur.through()) {
                    Some(&next) => cur = next,
                    None => break,
                }
            }
        }
        cycles
    }

    /// Components that meet no crossing and no bar.
    pub fn free_circles(&self) -> usize {
        self.components - self.traversal_cycles()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GaussFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedGauss(e.to_string()))?;
        let parse_ids = |ids: &[String], kind: SiteKind| -> Result<Vec<usize>> {
            ids.iter()
                .map(|s| {
                    let site: Site = s.parse()?;
                    if site.kind != kind {
                        return Err(Error::MalformedGauss(format!(
                            "`{s}` listed under the wrong kind"
                        )));
                    }
                    Ok(site.id)
                })
                .collect()
        };
        let crossings = parse_ids(&file.crossings, SiteKind::Crossing)?;
        let bars = parse_ids(&file.bars, SiteKind::Bar)?;
        let arcs = file
            .arcs
            .iter()
            .map(|(a, b)| Ok((a.parse()?, b.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        GaussData::new(crossings, bars, arcs, file.components)
    }

    pub fn to_json(&self) -> String {
        let file = GaussFile {
            components: self.components,
            crossings: self
                .crossings
                .iter()
                .map(|&i| Site::crossing(i).to_string())
                .collect(),
            bars: self
                .bars
                .iter()
                .map(|&i| Site::bar(i).to_string())
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    fn next_id(ids: &BTreeSet<usize>) -> usize {
        ids.last().map_or(1, |m| m + 1)
    }
}

impl fmt::Display for GaussData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ids: &BTreeSet<usize>, kind| {
            ids.iter()
                .map(|&id| Site { kind, id }.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let arcs: Vec<String> = self
            .arcs
            .iter()
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        write!(
            f,
            "({{{}}}, {{{}}}, {{{}}}, {})",
            list(&self.crossings, SiteKind::Crossing),
            list(&self.bars, SiteKind::Bar),
            arcs.join(", "),
            self.components
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussFile {
    components: usize,
    #[serde(default)]
    crossings: Vec<String>,
    #[serde(default)]
    bars: Vec<String>,
    #[serde(default)]
    arcs: Vec<(String, String)>,
}

/// Gauss data of the closure of a twin word.
///
/// Crossings and bars are numbered in order of occurrence. At `s_i` the strand
/// at position `i` enters at `1` and leaves at `3` in position `i + 1`.
pub fn closure_gauss(w: &Word) -> GaussData {
    let n = w.strands();
    // one thread per top position: first incoming and last outgoing endpoint
    let mut first: Vec<Option<Endpoint>> = vec![None; n];
    let mut last: Vec<Option<Endpoint>> = vec![None; n];
    let mut at: Vec<usize> = (0..n).collect();
    let mut arcs = BTreeMap::new();
    let (mut crossings, mut bars) = (BTreeSet::new(), BTreeSet::new());

    let mut enter = |thread: usize,
                     inp: Endpoint,
                     out: Endpoint,
                     first: &mut Vec<Option<Endpoint>>,
                     last: &mut Vec<Option<Endpoint>>| {
        match last[thread] {
            Some(prev) => {
                arcs.insert(prev, inp);
            }
            None => first[thread] = Some(inp),
        }
        last[thread] = Some(out);
    };

    for letter in w.letters() {
        let i = letter.index - 1;
        match letter.kind {
            LetterKind::S => {
                let c = Site::crossing(crossings.len() + 1);
                crossings.insert(c.id);
                enter(at[i], c.endpoint(1), c.endpoint(3), &mut first, &mut last);
                enter(
                    at[i + 1],
                    c.endpoint(2),
                    c.endpoint(4),
                    &mut first,
                    &mut last,
                );
                at.swap(i, i + 1);
            }
            LetterKind::R => at.swap(i, i + 1),
            LetterKind::G => {
                let b = Site::bar(bars.len() + 1);
                bars.insert(b.id);
                enter(at[i], b.endpoint(1), b.endpoint(2), &mut first, &mut last);
            }
        }
    }

    // the thread ending at bottom position p continues as the thread that
    // starts at top position p
    let mut succ = vec![0; n];
    for (p, &t) in at.iter().enumerate() {
        succ[t] = p;
    }
    for t in 0..n {
        let Some(out) = last[t] else { continue };
        let mut u = succ[t];
        while first[u].is_none() {
            u = succ[u];
        }
        arcs.insert(out, first[u].expect("thread with endpoints"));
    }

    GaussData {
        crossings,
        bars,
        arcs,
        components: w.perm_image().cycle_count(),
    }
}

/// Number of components: traversal cycles plus free circles.
pub fn gauss_components(g: &GaussData) -> usize {
    g.traversal_cycles() + g.free_circles()
}

/// Number of bars mod 2.
pub fn bar_parity(g: &GaussData) -> u8 {
    (g.bars.len() % 2) as u8
}

/// A kind-preserving renaming of sites.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SiteMap {
    pub crossings: BTreeMap<usize, usize>,
    pub bars: BTreeMap<usize, usize>,
}

impl SiteMap {
    pub fn get(&self, site: &Site) -> Option<Site> {
        let table = match site.kind {
            SiteKind::Crossing => &self.crossings,
            SiteKind::Bar => &self.bars,
        };
        table.get(&site.id).map(|&id| Site {
            kind: site.kind,
            id,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.crossings.iter().chain(&self.bars).all(|(a, b)| a == b)
    }
}

impl fmt::Display for SiteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, b) in &self.crossings {
            parts.push(format!("{} -> {}", Site::crossing(*a), Site::crossing(*b)));
        }
        for (a, b) in &self.bars {
            parts.push(format!("{} -> {}", Site::bar(*a), Site::bar(*b)));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Neighbour of `e` across its arc.
fn across(
    e: &Endpoint,
    arcs: &BTreeMap<Endpoint, Endpoint>,
    sources: &BTreeMap<Endpoint, Endpoint>,
) -> Endpoint {
    if e.is_incoming() {
        sources[e]
    } else {
        arcs[e]
    }
}

struct Matcher<'a> {
    a: &'a GaussData,
    b: &'a GaussData,
    a_sources: BTreeMap<Endpoint, Endpoint>,
    b_sources: BTreeMap<Endpoint, Endpoint>,
    map: HashMap<Site, Site>,
    used: HashSet<Site>,
}

impl Matcher<'_> {
    /// Assigns `x -> y` and everything it forces; records assignments for undo.
    fn propagate(&mut self, x: Site, y: Site, trail: &mut Vec<Site>) -> bool {
        let mut queue = VecDeque::from([(x, y)]);
        while let Some((x, y)) = queue.pop_front() {
            if x.kind != y.kind {
                return false;
            }
            match self.map.get(&x) {
                Some(&z) if z == y => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used.contains(&y) {
                return false;
            }
            self.map.insert(x, y);
            self.used.insert(y);
            trail.push(x);
            for label in 1..=x.arity() {
                let ex = across(&x.endpoint(label), &self.a.arcs, &self.a_sources);
                let ey = across(&y.endpoint(label), &self.b.arcs, &self.b_sources);
                if ex.label != ey.label || ex.site.kind != ey.site.kind {
                    return false;
                }
                queue.push_back((ex.site, ey.site));
            }
        }
        true
    }

    fn search(&mut self, order: &[Site], candidates: &[Site]) -> bool {
        let Some(&root) = order.iter().find(|s| !self.map.contains_key(s)) else {
            return true;
        };
        for &cand in candidates {
            if cand.kind != root.kind || self.used.contains(&cand) {
                continue;
            }
            let mut trail = Vec::new();
            if self.propagate(root, cand, &mut trail) && self.search(order, candidates) {
                return true;
            }
            for x in trail {
                let y = self.map.remove(&x).expect("assigned");
                self.used.remove(&y);
            }
        }
        false
    }
}

/// Searches for a renaming of sites carrying the arcs of `a` onto those of `b`.
pub fn same_gauss_data(a: &GaussData, b: &GaussData) -> Option<SiteMap> {
    if a.crossings.len() != b.crossings.len()
        || a.bars.len() != b.bars.len()
        || a.components != b.components
        || a.traversal_cycles() != b.traversal_cycles()
    {
        return None;
    }
    let mut m = Matcher {
        a,
        b,
        a_sources: a.sources(),
        b_sources: b.sources(),
        map: HashMap::new(),
        used: HashSet::new(),
    };
    let order: Vec<Site> = a.sites().collect();
    let candidates: Vec<Site> = b.sites().collect();
    // try the identity first so that equal data map to themselves
    let mut trail = Vec::new();
    let identity_ok = order.iter().all(|s| b.contains_site(s))
        && order.iter().all(|&s| m.propagate(s, s, &mut trail));
    if !identity_ok {
        m.map.clear();
        m.used.clear();
        if !m.search(&order, &candidates) {
            return None;
        }
    }
    let mut out = SiteMap::default();
    for (x, y) in m.map {
        match x.kind {
            SiteKind::Crossing => out.crossings.insert(x.id, y.id),
            SiteKind::Bar => out.bars.insert(x.id, y.id),
        };
    }
    Some(out)
}

/// Isomorphism-invariant key: equal keys iff same Gauss data.
pub fn canonical_key(g: &GaussData) -> Vec<usize> {
    let sources = g.sources();
    let neighbours = |s: &Site| -> Vec<Endpoint> {
        (1..=s.arity())
            .map(|l| across(&s.endpoint(l), &g.arcs, &sources))
            .collect()
    };

    // connected pieces of the site graph
    let mut piece_of: HashMap<Site, usize> = HashMap::new();
    let mut pieces: Vec<Vec<Site>> = Vec::new();
    for s in g.sites() {
        if piece_of.contains_key(&s) {
            continue;
        }
        let id = pieces.len();
        let mut members = vec![s];
        piece_of.insert(s, id);
        let mut i = 0;
        while i < members.len() {
            for e in neighbours(&members[i]) {
                if let Entry::Vacant(slot) = piece_of.entry(e.site) {
                    slot.insert(id);
                    members.push(e.site);
                }
            }
            i += 1;
        }
        pieces.push(members);
    }

    let code_from = |start: Site| -> Vec<usize> {
        let mut order = vec![start];
        let mut index: HashMap<Site, usize> = HashMap::from([(start, 0)]);
        let mut code = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            code.push(match s.kind {
                SiteKind::Crossing => 0,
                SiteKind::Bar => 1,
            });
            for e in neighbours(&s) {
                let next = order.len();
                let k = *index.entry(e.site).or_insert_with(|| {
                    order.push(e.site);
                    next
                });
                code.push(k);
                code.push(e.label as usize);
            }
            i += 1;
        }
        code
    };

    let mut codes: Vec<Vec<usize>> = pieces
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&s| code_from(s))
                .min()
                .expect("non-empty")
        })
        .collect();
    codes.sort();
    let mut key = vec![g.components, codes.len()];
    for c in codes {
        key.push(c.len());
        key.extend(c);
    }
    key
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Dest {
    In(Endpoint),
    Free(usize),
}

/// A twin word whose closure has the given Gauss data.
///
/// Sites are placed top to bottom, crossings before bars, each in id order.
/// Arcs that run upward in this order pass through the closure and become the
/// strands at the top; strands are routed with virtual crossings.
pub fn braid_gauss(g: &GaussData) -> Result<Word> {
    let order: Vec<Site> = g.sites().collect();
    let rank: HashMap<Site, usize> = order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut initial: Vec<Dest> = g
        .arcs
        .iter()
        .filter(|(from, to)| rank[&to.site] <= rank[&from.site])
        .map(|(_, &to)| Dest::In(to))
        .collect();
    initial.sort_by_key(|d| match d {
        Dest::In(e) => *e,
        Dest::Free(_) => unreachable!(),
    });
    initial.extend((0..g.free_circles()).map(Dest::Free));
    let n = initial.len();
    if n == 0 {
        return Err(Error::MalformedGauss("no components".into()));
    }

    let mut line = initial.clone();
    let mut letters = Vec::new();
    let find = |line: &[Dest], e: Endpoint| {
        line.iter()
            .position(|&d| d == Dest::In(e))
            .expect("strand for every incoming endpoint")
    };
    // swap positions q, q+1 (0-based)
    let swap = |line: &mut Vec<Dest>, letters: &mut Vec<Letter>, q: usize| {
        line.swap(q, q + 1);
        letters.push(Letter::r(q + 1));
    };

    for site in &order {
        match site.kind {
            SiteKind::Crossing => {
                let pa = find(&line, site.endpoint(1));
                let pb = find(&line, site.endpoint(2));
                let p = if pa < pb {
                    for q in (pa + 1..pb).rev() {
                        swap(&mut line, &mut letters, q);
                    }
                    pa
                } else {
                    for q in (pb..pa).rev() {
                        swap(&mut line, &mut letters, q);
                    }
                    pb
                };
                letters.push(Letter::s(p + 1));
                line[p] = Dest::In(g.arcs[&site.endpoint(4)]);
                line[p + 1] = Dest::In(g.arcs[&site.endpoint(3)]);
            }
            SiteKind::Bar => {
                let j = find(&line, site.endpoint(1));
                letters.push(Letter::g(j + 1));
                line[j] = Dest::In(g.arcs[&site.endpoint(2)]);
            }
        }
    }

    for (i, want) in initial.iter().enumerate() {
        let mut p = line[i..]
            .iter()
            .position(|d| d == want)
            .expect("same strands")
            + i;
        while p > i {
            swap(&mut line, &mut letters, p - 1);
            p -= 1;
        }
    }
    Word::new(n, letters)
}

/// Where a "+" move is inserted: on the arc leaving an outgoing endpoint, or on
/// a free circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrandRef {
    Arc(Endpoint),
    Free,
}

impl fmt::Display for StrandRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrandRef::Arc(e) => write!(f, "{e}"),
            StrandRef::Free => write!(f, "free"),
        }
    }
}

/// Monogon types: the loop leaves at `3` and returns at `2`, or leaves at `4`
/// and returns at `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kink {
    ThreeToTwo,
    FourToOne,
}

/// Bigon types for the second move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bigon {
    /// `c.3 -> d.2` and `c.4 -> d.1`.
    Parallel,
    /// `c.4 -> d.1` and `d.4 -> c.1`.
    OppositeLeft,
    /// `c.3 -> d.2` and `d.3 -> c.2`.
    OppositeRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveSpec {
    R1Plus {
        on: StrandRef,
        kink: Kink,
    },
    R1Minus {
        crossing: usize,
    },
    /// Strand `a` enters the new crossings first on the side fixed by the
    /// bigon type; if `a == b` is an arc, `a`'s passage comes first on it.
    R2Plus {
        bigon: Bigon,
        a: StrandRef,
        b: StrandRef,
    },
    R2Minus {
        first: usize,
        second: usize,
    },
    T2Plus {
        on: StrandRef,
    },
    T2Minus {
        first: usize,
        second: usize,
    },
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveSpec::R1Plus { on, kink } => write!(f, "R1+ {on} {kink:?}"),
            MoveSpec::R1Minus { crossing } => write!(f, "R1- c{crossing}"),
            MoveSpec::R2Plus { bigon, a, b } => write!(f, "R2+ {bigon:?} {a} {b}"),
            MoveSpec::R2Minus { first, second } => write!(f, "R2- c{first} c{second}"),
            MoveSpec::T2Plus { on } => write!(f, "T2+ {on}"),
            MoveSpec::T2Minus { first, second } => write!(f, "T2- b{first} b{second}"),
        }
    }
}

impl FromStr for StrandRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "free" {
            Ok(StrandRef::Free)
        } else {
            Ok(StrandRef::Arc(s.parse()?))
        }
    }
}

impl FromStr for MoveSpec {
    type Err = Error;

    /// Parses the text written by `Display`, e.g. `R2+ Parallel c1.3 free`.
    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::MoveMismatch(format!("cannot parse `{line}`"));
        let parts: Vec<&str> = line.split_whitespace().collect();
        let id = |t: &str, prefix: char| {
            t.strip_prefix(prefix)
                .and_then(|k| k.parse().ok())
                .ok_or_else(bad)
        };
        let kink = |t: &str| match t {
            "ThreeToTwo" => Ok(Kink::ThreeToTwo),
            "FourToOne" => Ok(Kink::FourToOne),
            _ => Err(bad()),
        };
        let bigon = |t: &str| match t {
            "Parallel" => Ok(Bigon::Parallel),
            "OppositeLeft" => Ok(Bigon::OppositeLeft),
            "OppositeRight" => Ok(Bigon::OppositeRight),
            _ => Err(bad()),
        };
        Ok(match parts.as_slice() {
            ["R1+", on, k] => MoveSpec::R1Plus {
                on: on.parse()?,
                kink: kink(k)?,
            },
            ["R1-", c] => MoveSpec::R1Minus {
                crossing: id(c, 'c')?,
            },
            ["R2+", t, a, b] => MoveSpec::R2Plus {
                bigon: bigon(t)?,
                a: a.parse()?,
                b: b.parse()?,
            },
            ["R2-", c, d] => MoveSpec::R2Minus {
                first: id(c, 'c')?,
                second: id(d, 'c')?,
            },
            ["T2+", on] => MoveSpec::T2Plus { on: on.parse()? },
            ["T2-", b, b2] => MoveSpec::T2Minus {
                first: id(b, 'b')?,
                second: id(b2, 'b')?,
            },
            _ => return Err(bad()),
        })
    }
}

fn mismatch(m: &MoveSpec, why: &str) -> Error {
    Error::MoveMismatch(format!("{m}: {why}"))
}

/// Threads `chain` (incoming, outgoing) passages into a strand.
fn insert_chain(
    g: &mut GaussData,
    on: StrandRef,
    chain: &[(Endpoint, Endpoint)],
) -> std::result::Result<(), &'static str> {
    let (head, tail) = (chain[0].0, chain[chain.len() - 1].1);
    match on {
        StrandRef::Arc(e) => {
            let t = *g.arcs.get(&e).ok_or("no arc at that endpoint")?;
            g.arcs.insert(e, head);
            g.arcs.insert(tail, t);
        }
        StrandRef::Free => {
            g.arcs.insert(tail, head);
        }
    }
    for w in chain.windows(2) {
        g.arcs.insert(w[0].1, w[1].0);
    }
    Ok(())
}

/// Removes `sites`, reconnecting every strand through them.
fn splice(g: &GaussData, sites: &[Site]) -> GaussData {
    let removed: HashSet<Site> = sites.iter().copied().collect();
    let mut arcs = BTreeMap::new();
    for (&from, &to) in &g.arcs {
        if removed.contains(&from.site) {
            continue;
        }
        let mut cur = to;
        while removed.contains(&cur.site) {
            cur = g.arcs[&cur.through()];
        }
        arcs.insert(from, cur);
    }
    let mut out = GaussData {
        crossings: g.crossings.clone(),
        bars: g.bars.clone(),
        arcs,
        components: g.components,
    };
    for s in sites {
        match s.kind {
            SiteKind::Crossing => out.crossings.remove(&s.id),
            SiteKind::Bar => out.bars.remove(&s.id),
        };
    }
    out
}

fn kink_of(g: &GaussData, c: usize) -> Option<Kink> {
    let c = Site::crossing(c);
    if g.arcs.get(&c.endpoint(3)) == Some(&c.endpoint(2)) {
        Some(Kink::ThreeToTwo)
    } else if g.arcs.get(&c.endpoint(4)) == Some(&c.endpoint(1)) {
        Some(Kink::FourToOne)
    } else {
        None
    }
}

fn bigon_of(g: &GaussData, c: usize, d: usize) -> Option<Bigon> {
    if c == d {
        return None;
    }
    let (c, d) = (Site::crossing(c), Site::crossing(d));
    let arc = |from: Site, fl: u8, to: Site, tl: u8| {
        g.arcs.get(&from.endpoint(fl)) == Some(&to.endpoint(tl))
    };
    if arc(c, 3, d, 2) && arc(c, 4, d, 1) {
        Some(Bigon::Parallel)
    } else if arc(c, 4, d, 1) && arc(d, 4, c, 1) {
        Some(Bigon::OppositeLeft)
    } else if arc(c, 3, d, 2) && arc(d, 3, c, 2) {
        Some(Bigon::OppositeRight)
    } else {
        None
    }
}

/// Applies one move. The component count never changes.
pub fn apply_move(g: &GaussData, m: &MoveSpec) -> Result<GaussData> {
    let check_arc = |on: &StrandRef| -> Result<()> {
        if let StrandRef::Arc(e) = on {
            if !g.arcs.contains_key(e) {
                return Err(mismatch(m, "no arc at that endpoint"));
            }
        }
        Ok(())
    };
    let free_needed = match *m {
        MoveSpec::R1Plus { on, .. } | MoveSpec::T2Plus { on } => usize::from(on == StrandRef::Free),
        MoveSpec::R2Plus { a, b, .. } => {
            usize::from(a == StrandRef::Free) + usize::from(b == StrandRef::Free)
        }
        _ => 0,
    };
    if free_needed > g.free_circles() {
        return Err(mismatch(m, "not enough free circles"));
    }
    match *m {
        MoveSpec::R1Minus { crossing } => {
            if !g.crossings.contains(&crossing) || kink_of(g, crossing).is_none() {
                return Err(mismatch(m, "not a monogon"));
            }
            Ok(splice(g, &[Site::crossing(crossing)]))
        }
        MoveSpec::R2Minus { first, second } => {
            if !g.crossings.contains(&first)
                || !g.crossings.contains(&second)
                || bigon_of(g, first, second).is_none()
            {
                return Err(mismatch(m, "not a bigon"));
            }
            Ok(splice(g, &[Site::crossing(first), Site::crossing(second)]))
        }
        MoveSpec::T2Minus { first, second } => {
            let (b, b2) = (Site::bar(first), Site::bar(second));
            if first == second
                || !g.bars.contains(&first)
                || !g.bars.contains(&second)
                || g.arcs.get(&b.endpoint(2)) != Some(&b2.endpoint(1))
            {
                return Err(mismatch(m, "bars are not adjacent"));
            }
            Ok(splice(g, &[b, b2]))
        }
        MoveSpec::R1Plus { on, kink } => {
            check_arc(&on)?;
            let mut out = g.clone();
            let c = Site::crossing(GaussData::next_id(&g.crossings));
            out.crossings.insert(c.id);
            let p = |l: u8| (c.endpoint(l), c.endpoint(l).through());
            let chain = match kink {
                Kink::ThreeToTwo => [p(1), p(2)],
                Kink::FourToOne => [p(2), p(1)],
            };
            insert_chain(&mut out, on, &chain).map_err(|e| mismatch(m, e))?;
            Ok(out)
        }
        MoveSpec::T2Plus { on } => {
            check_arc(&on)?;
            let mut out = g.clone();
            let b = Site::bar(GaussData::next_id(&g.bars));
            let b2 = Site::bar(b.id + 1);
            out.bars.insert(b.id);
            out.bars.insert(b2.id);
            let chain = [
                (b.endpoint(1), b.endpoint(2)),
                (b2.endpoint(1), b2.endpoint(2)),
            ];
            insert_chain(&mut out, on, &chain).map_err(|e| mismatch(m, e))?;
            Ok(out)
        }
        MoveSpec::R2Plus { bigon, a, b } => {
            check_arc(&a)?;
            check_arc(&b)?;
            let mut out = g.clone();
            let c = Site::crossing(GaussData::next_id(&g.crossings));
            let d = Site::crossing(c.id + 1);
            out.crossings.insert(c.id);
            out.crossings.insert(d.id);
            let p = |s: Site, l: u8| (s.endpoint(l), s.endpoint(l).through());
            let (chain_a, chain_b) = match bigon {
                Bigon::Parallel => ([p(c, 1), p(d, 2)], [p(c, 2), p(d, 1)]),
                Bigon::OppositeLeft => ([p(c, 2), p(d, 1)], [p(d, 2), p(c, 1)]),
                Bigon::OppositeRight => ([p(c, 1), p(d, 2)], [p(d, 1), p(c, 2)]),
            };
            if a == b && a != StrandRef::Free {
                let chain: Vec<_> = chain_a.iter().chain(&chain_b).copied().collect();
                insert_chain(&mut out, a, &chain).map_err(|e| mismatch(m, e))?;
            } else {
                // a free circle used twice means two distinct circles
                insert_chain(&mut out, a, &chain_a).map_err(|e| mismatch(m, e))?;
                insert_chain(&mut out, b, &chain_b).map_err(|e| mismatch(m, e))?;
            }
            Ok(out)
        }
    }
}

/// Every move that applies to `g` without exceeding `max_sites` sites.
pub fn available_moves(g: &GaussData, max_sites: usize) -> Vec<MoveSpec> {
    let mut moves = Vec::new();
    for &c in &g.crossings {
        if kink_of(g, c).is_some() {
            moves.push(MoveSpec::R1Minus { crossing: c });
        }
        for &d in &g.crossings {
            if bigon_of(g, c, d).is_some() {
                moves.push(MoveSpec::R2Minus {
                    first: c,
                    second: d,
                });
            }
        }
    }
    for &b in &g.bars {
        let end = g.arcs[&Site::bar(b).endpoint(2)];
        if end.site.kind == SiteKind::Bar && end.site.id != b {
            moves.push(MoveSpec::T2Minus {
                first: b,
                second: end.site.id,
            });
        }
    }
    let mut strands: Vec<StrandRef> = g.arcs.keys().map(|&e| StrandRef::Arc(e)).collect();
    let free = g.free_circles();
    if free > 0 {
        strands.push(StrandRef::Free);
    }
    let sites = g.site_count();
    if sites < max_sites {
        for &on in &strands {
            for kink in [Kink::ThreeToTwo, Kink::FourToOne] {
                moves.push(MoveSpec::R1Plus { on, kink });
            }
        }
    }
    if sites + 2 <= max_sites {
        for &on in &strands {
            moves.push(MoveSpec::T2Plus { on });
        }
        for bigon in [Bigon::Parallel, Bigon::OppositeLeft, Bigon::OppositeRight] {
            for &a in &strands {
                for &b in &strands {
                    if a == StrandRef::Free && b == StrandRef::Free && free < 2 {
                        continue;
                    }
                    moves.push(MoveSpec::R2Plus { bigon, a, b });
                }
            }
        }
    }
    moves
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoodleBudget {
    pub nodes: usize,
    /// Intermediate diagrams may have this many more sites than the larger
    /// input.
    pub extra_sites: usize,
}

impl Default for DoodleBudget {
    fn default() -> Self {
        DoodleBudget {
            nodes: 100_000,
            extra_sites: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoodleInvariant {
    BarParity,
    Components,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DoodleVerdict {
    /// Moves taking the first diagram to one with the same Gauss data as the
    /// second.
    Equivalent(Vec<MoveSpec>),
    Distinct(DoodleInvariant),
    Unknown,
}

/// Replays a move path.
pub fn replay_moves(g: &GaussData, path: &[MoveSpec]) -> Result<GaussData> {
    path.iter()
        .try_fold(g.clone(), |acc, m| apply_move(&acc, m))
}

/// Breadth-first search over moves from `g1`, nodes identified up to
/// renaming of sites.
pub fn equivalent_bounded(g1: &GaussData, g2: &GaussData, budget: &DoodleBudget) -> DoodleVerdict {
    if bar_parity(g1) != bar_parity(g2) {
        return DoodleVerdict::Distinct(DoodleInvariant::BarParity);
    }
    if g1.components != g2.components {
        return DoodleVerdict::Distinct(DoodleInvariant::Components);
    }
    if same_gauss_data(g1, g2).is_some() {
        return DoodleVerdict::Equivalent(Vec::new());
    }
    if budget.nodes == 0 {
        return DoodleVerdict::Unknown;
    }
    let target = canonical_key(g2);
    let max_sites = g1.site_count().max(g2.site_count()) + budget.extra_sites;
    // node: data, parent, move from parent
    let mut nodes: Vec<(GaussData, usize, Option<MoveSpec>)> = vec![(g1.clone(), 0, None)];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([canonical_key(g1)]);
    let mut head = 0;
    while head < nodes.len() {
        let g = nodes[head].0.clone();
        for m in available_moves(&g, max_sites) {
            let next = apply_move(&g, &m).expect("available move applies");
            let key = canonical_key(&next);
            if !seen.insert(key.clone()) {
                continue;
            }
            nodes.push((next, head, Some(m)));
            if key == target {
                let mut path = Vec::new();
                let mut i = nodes.len() - 1;
                while let Some(m) = nodes[i].2 {
                    path.push(m);
                    i = nodes[i].1;
                }
                path.reverse();
                return DoodleVerdict::Equivalent(path);
            }
            if nodes.len() >= budget.nodes {
                return DoodleVerdict::Unknown;
            }
        }
        head += 1;
    }
    DoodleVerdict::Unknown
}
