//! The signed dual graph of a sequence of point blowups, as a rewriting
//! system on small graphs driven by an event script.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::arith::Sign;
use crate::error::{Error, Result};

pub use crate::blowup::is_locally_monomial;

/// Which of the two sets the graph describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Region {
    U,
    V,
}

impl FromStr for Region {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "U" => Ok(Region::U),
            "V" => Ok(Region::V),
            _ => Err(format!("expected U or V, got `{s}`")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    pub id: usize,
    /// Name of the maximal interval.
    pub interval: String,
    pub sign: Sign,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedDualGraph {
    pub region: Region,
    pub vertices: Vec<Vertex>,
    /// Pairs `(a, b)` with `a < b`.
    pub edges: BTreeSet<(usize, usize)>,
    pub generation: usize,
    /// Counter for fresh interval names.
    next_interval: usize,
    /// Counter for the new exceptional components.
    next_component: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Position {
    TwoEdges,
    OneEdge,
    Isolated,
}

impl Position {
    fn degree(self) -> usize {
        match self {
            Position::TwoEdges => 2,
            Position::OneEdge => 1,
            Position::Isolated => 0,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::TwoEdges => "two-edges",
            Position::OneEdge => "one-edge",
            Position::Isolated => "isolated",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlowupEvent {
    /// Center at the common point of the intervals of an edge.
    Case1 { a: usize, b: usize },
    /// Center on one interval, `omega` points of it blown up.
    Case21 { a: usize, position: Position, omega: usize },
    /// First blowup when the region is U.
    Case22First,
    /// Center at the far end of an endpoint's interval.
    Case22Endpoint { a: usize },
}

impl fmt::Display for BlowupEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupEvent::Case1 { a, b } => write!(f, "case1 {a} {b}"),
            BlowupEvent::Case21 { a, position, omega } => write!(f, "case2.1 {a} {position} {omega}"),
            BlowupEvent::Case22First => f.write_str("case2.2 first-step-U"),
            BlowupEvent::Case22Endpoint { a } => write!(f, "case2.2 endpoint {a}"),
        }
    }
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// The graph before any blowup: one vertex, no edges.
pub fn init_graph(w: Region) -> SignedDualGraph {
    SignedDualGraph {
        region: w,
        vertices: vec![Vertex { id: 0, interval: "I0".into(), sign: Sign::Pos }],
        edges: BTreeSet::new(),
        generation: 1,
        next_interval: 1,
        next_component: 1,
    }
}

impl SignedDualGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Neighbours in ascending id order.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut n: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        n.sort();
        n
    }

    fn has_vertex(&self, v: usize) -> bool {
        v < self.vertices.len()
    }

    fn fresh_interval(&mut self) -> String {
        let s = format!("I{}", self.next_interval);
        self.next_interval += 1;
        s
    }

    fn add_vertex(&mut self, interval: String, sign: Sign) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, interval, sign });
        id
    }

    /// Checks the event against the graph.
    pub fn check(&self, e: &BlowupEvent) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidEvent(m));
        match *e {
            BlowupEvent::Case1 { a, b } => {
                if !self.edges.contains(&edge(a, b)) {
                    return bad(format!("no edge ({a}, {b})"));
                }
            }
            BlowupEvent::Case21 { a, position, omega } => {
                if !self.has_vertex(a) {
                    return bad(format!("no vertex {a}"));
                }
                if omega == 0 {
                    return bad("omega must be at least 1".into());
                }
                let d = self.degree(a);
                if d != position.degree() {
                    return bad(format!("vertex {a} has degree {d}, {position} needs {}", position.degree()));
                }
            }
            BlowupEvent::Case22First => {
                if self.generation != 1 || self.region != Region::U {
                    return bad("first-step-U applies only to the first graph of U".into());
                }
            }
            BlowupEvent::Case22Endpoint { a } => {
                if !self.has_vertex(a) {
                    return bad(format!("no vertex {a}"));
                }
                if self.generation == 1 && self.region == Region::U {
                    return bad("the first blowup of U uses first-step-U".into());
                }
                if self.degree(a) > 1 {
                    return bad(format!("vertex {a} is not an endpoint"));
                }
            }
        }
        Ok(())
    }

    /// The rewritten graph; vertex ids of the input are kept.
    pub fn apply(&self, e: &BlowupEvent) -> Result<SignedDualGraph> {
        self.check(e)?;
        let mut g = self.clone();
        match *e {
            BlowupEvent::Case1 { a, b } => {
                let (s, st) = (g.vertices[a].sign, g.vertices[b].sign);
                let sigma = s * st;
                g.edges.remove(&edge(a, b));
                let (ia, ib, j) = (g.fresh_interval(), g.fresh_interval(), g.fresh_interval());
                g.vertices[a].interval = ia;
                g.vertices[a].sign = sigma;
                g.vertices[b].interval = ib;
                g.vertices[b].sign = sigma;
                let c = g.add_vertex(j, st);
                g.edges.insert(edge(a, c));
                g.edges.insert(edge(b, c));
            }
            BlowupEvent::Case21 { a, omega, .. } => {
                let nb = g.neighbours(a);
                for &n in &nb {
                    g.edges.remove(&edge(a, n));
                }
                let s = g.vertices[a].sign;
                // interval signs s, -s, s, ... and s on every new component
                let mut chain = vec![a];
                g.vertices[a].interval = g.fresh_interval();
                for k in 1..=omega {
                    let comp = format!("[-inf,inf]_{}", g.next_component);
                    g.next_component += 1;
                    chain.push(g.add_vertex(comp, s));
                    let iv = g.fresh_interval();
                    let sk = if k % 2 == 1 { -s } else { s };
                    chain.push(g.add_vertex(iv, sk));
                }
                for w in chain.windows(2) {
                    g.edges.insert(edge(w[0], w[1]));
                }
                // the first neighbour attaches to the start of the chain
                if let Some(&n) = nb.first() {
                    g.edges.insert(edge(n, chain[0]));
                }
                if let Some(&n) = nb.get(1) {
                    g.edges.insert(edge(n, *chain.last().unwrap()));
                }
            }
            BlowupEvent::Case22First => {
                let a = 0;
                g.vertices[a].interval = g.fresh_interval();
                g.vertices[a].sign = Sign::Pos;
                let t = g.fresh_interval();
                let p = g.add_vertex(t.clone(), Sign::Pos);
                let m = g.add_vertex(t, Sign::Neg);
                g.edges.insert(edge(p, a));
                g.edges.insert(edge(a, m));
            }
            BlowupEvent::Case22Endpoint { a } => {
                let t = g.fresh_interval();
                let b = g.add_vertex(t, Sign::Pos);
                g.edges.insert(edge(a, b));
            }
        }
        g.generation += 1;
        Ok(g)
    }

    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Connected, acyclic, every vertex on at most two edges.
    pub fn is_bamboo(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        if self.degrees().iter().any(|&d| d > 2) {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every event valid on this graph, with `omega` up to `max_omega`.
    pub fn valid_events(&self, max_omega: usize) -> Vec<BlowupEvent> {
        let mut out: Vec<BlowupEvent> = self.edges.iter().map(|&(a, b)| BlowupEvent::Case1 { a, b }).collect();
        let first_of_u = self.generation == 1 && self.region == Region::U;
        for (v, d) in self.degrees().into_iter().enumerate() {
            let position = match d {
                0 => Position::Isolated,
                1 => Position::OneEdge,
                2 => Position::TwoEdges,
                _ => continue,
            };
            out.extend((1..=max_omega).map(|omega| BlowupEvent::Case21 { a: v, position, omega }));
            if d <= 1 && !first_of_u {
                out.push(BlowupEvent::Case22Endpoint { a: v });
            }
        }
        if first_of_u {
            out.push(BlowupEvent::Case22First);
        }
        out
    }

    /// Adjacency listing, one vertex per line.
    pub fn adjacency(&self) -> Vec<String> {
        self.vertices
            .iter()
            .map(|v| {
                let nb: Vec<String> = self.neighbours(v.id).iter().map(|n| n.to_string()).collect();
                format!("{} ({}, {}): {}", v.id, v.interval, v.sign.symbol(), nb.join(" "))
            })
            .collect()
    }

    /// Graphviz text.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for v in &self.vertices {
            s.push_str(&format!("  v{} [label=\"{} {}\"];\n", v.id, v.interval, v.sign.symbol()));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  v{a} -- v{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn apply_event(g: &SignedDualGraph, e: &BlowupEvent) -> Result<SignedDualGraph> {
    g.apply(e)
}

pub fn is_bamboo(g: &SignedDualGraph) -> bool {
    g.is_bamboo()
}

/// A parsed event script: the region and the events with their line numbers.
#[derive(Clone, PartialEq, Debug)]
pub struct Script {
    pub region: Region,
    pub events: Vec<(usize, BlowupEvent)>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

/// Parses `init U|V` followed by one event per line; `#` starts a comment.
pub fn parse_script(src: &str) -> Result<Script> {
    let mut region = None;
    let mut events = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut col = 0;
        for part in text.split(' ') {
            if !part.trim().is_empty() {
                words.push((col + 1 + (part.len() - part.trim_start().len()), part.trim()));
            }
            col += part.len() + 1;
        }
        let Some(&(c0, head)) = words.first() else { continue };
        let arg = |k: usize| -> Result<(usize, &str)> {
            words.get(k).copied().ok_or_else(|| syntax(line, raw.len() + 1, format!("`{head}` needs more arguments")))
        };
        let num = |k: usize| -> Result<usize> {
            let (c, w) = arg(k)?;
            w.parse().map_err(|_| syntax(line, c, format!("expected a number, got `{w}`")))
        };
        let expect_len = |n: usize| -> Result<()> {
            match words.get(n) {
                Some(&(c, w)) => Err(syntax(line, c, format!("unexpected `{w}`"))),
                None => Ok(()),
            }
        };
        if head == "init" {
            if region.is_some() {
                return Err(syntax(line, c0, "second init"));
            }
            let (c, w) = arg(1)?;
            region = Some(w.parse::<Region>().map_err(|m| syntax(line, c, m))?);
            expect_len(2)?;
            continue;
        }
        if region.is_none() {
            return Err(syntax(line, c0, "the script must start with `init U` or `init V`"));
        }
        let e = match head {
            "case1" => {
                let e = BlowupEvent::Case1 { a: num(1)?, b: num(2)? };
                expect_len(3)?;
                e
            }
            "case2.1" => {
                let a = num(1)?;
                let (c, w) = arg(2)?;
                let position = match w {
                    "two-edges" => Position::TwoEdges,
                    "one-edge" => Position::OneEdge,
                    "isolated" => Position::Isolated,
                    _ => return Err(syntax(line, c, format!("expected two-edges, one-edge or isolated, got `{w}`"))),
                };
                let omega = num(3)?;
                expect_len(4)?;
                BlowupEvent::Case21 { a, position, omega }
            }
            "case2.2" => {
                let (c, w) = arg(1)?;
                match w {
                    "first-step-U" => {
                        expect_len(2)?;
                        BlowupEvent::Case22First
                    }
                    "endpoint" => {
                        let a = num(2)?;
                        expect_len(3)?;
                        BlowupEvent::Case22Endpoint { a }
                    }
                    _ => return Err(syntax(line, c, format!("expected first-step-U or endpoint, got `{w}`"))),
                }
            }
            _ => return Err(syntax(line, c0, format!("unknown event `{head}`"))),
        };
        events.push((line, e));
    }
    let region = region.ok_or_else(|| syntax(1, 1, "empty script"))?;
    Ok(Script { region, events })
}

/// Runs a script, returning the graph after every event (the initial graph first).
pub fn run_script(s: &Script) -> Result<Vec<SignedDualGraph>> {
    let mut out = vec![init_graph(s.region)];
    for (line, e) in &s.events {
        let g = out.last().unwrap().apply(e).map_err(|err| match err {
            Error::InvalidEvent(m) => Error::InvalidEvent(format!("line {line}: {m}")),
            other => other,
        })?;
        out.push(g);
    }
    Ok(out)
}
