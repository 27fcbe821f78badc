//! Reading and writing the subset of HOA v1 used by the toolkit: state-based
//! Büchi automata and transition-based `parity min even` automata, both with
//! explicit edge labels.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::automaton::{Alphabet, Dpa, Nba, MAX_APS};
use crate::error::{Error, Result};
use crate::postprocess::compress_priorities;

/// A parsed automaton of either supported kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Nba(Nba),
    Dpa(Dpa),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Str(String),
    Int(usize),
    Alias(String),
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Bang,
    Amp,
    Bar,
    Body,
    End,
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            b'/' if b.get(i + 1) == Some(&b'*') => {
                i += 2;
                while i + 1 < b.len() && !(b[i] == b'*' && b[i + 1] == b'/') {
                    if b[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if i + 1 >= b.len() {
                    return Err(syntax(line, "unterminated comment"));
                }
                i += 2;
            }
            b'"' => {
                let start_line = line;
                i += 1;
                let mut s = String::new();
                loop {
                    match b.get(i) {
                        None => return Err(syntax(start_line, "unterminated string")),
                        Some(b'"') => {
                            i += 1;
                            break;
                        }
                        Some(b'\\') => {
                            if let Some(&e) = b.get(i + 1) {
                                s.push(e as char);
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            if ch == b'\n' {
                                line += 1;
                            }
                            s.push(ch as char);
                            i += 1;
                        }
                    }
                }
                out.push((Tok::Str(s), start_line));
            }
            b'-' if text[i..].starts_with("--BODY--") => {
                out.push((Tok::Body, line));
                i += 8;
            }
            b'-' if text[i..].starts_with("--END--") => {
                out.push((Tok::End, line));
                i += 7;
            }
            b'-' if text[i..].starts_with("--ABORT--") => {
                return Err(syntax(line, "automaton aborted"));
            }
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let v = text[start..i]
                    .parse()
                    .map_err(|_| syntax(line, "integer out of range"))?;
                out.push((Tok::Int(v), line));
            }
            b'@' => {
                let start = i + 1;
                i += 1;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'-') {
                    i += 1;
                }
                out.push((Tok::Alias(text[start..i].to_string()), line));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'-') {
                    i += 1;
                }
                let word = text[start..i].to_string();
                if b.get(i) == Some(&b':') {
                    i += 1;
                    out.push((Tok::Header(word), line));
                } else {
                    out.push((Tok::Ident(word), line));
                }
            }
            _ => {
                let t = match c {
                    b'[' => Tok::LBrack,
                    b']' => Tok::RBrack,
                    b'{' => Tok::LBrace,
                    b'}' => Tok::RBrace,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'!' => Tok::Bang,
                    b'&' => Tok::Amp,
                    b'|' => Tok::Bar,
                    _ => return Err(syntax(line, format!("unexpected character '{}'", c as char))),
                };
                out.push((t, line));
                i += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Label {
    True,
    False,
    Ap(usize),
    Not(Box<Label>),
    And(Box<Label>, Box<Label>),
    Or(Box<Label>, Box<Label>),
}

impl Label {
    fn eval(&self, sym: usize) -> bool {
        match self {
            Label::True => true,
            Label::False => false,
            Label::Ap(i) => sym >> i & 1 == 1,
            Label::Not(l) => !l.eval(sym),
            Label::And(a, b) => a.eval(sym) && b.eval(sym),
            Label::Or(a, b) => a.eval(sym) || b.eval(sym),
        }
    }
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.0);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        let line = self.line();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(line, format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<usize> {
        let line = self.line();
        match self.next() {
            Some(Tok::Int(v)) => Ok(*v),
            _ => Err(syntax(line, format!("expected {what}"))),
        }
    }
}

struct LabelParser<'a, 'b> {
    cur: &'b mut Cursor<'a>,
    num_aps: usize,
    aliases: &'b HashMap<String, Label>,
}

impl LabelParser<'_, '_> {
    fn or(&mut self) -> Result<Label> {
        let mut l = self.and()?;
        while self.cur.peek() == Some(&Tok::Bar) {
            self.cur.next();
            l = Label::Or(Box::new(l), Box::new(self.and()?));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Label> {
        let mut l = self.not()?;
        while self.cur.peek() == Some(&Tok::Amp) {
            self.cur.next();
            l = Label::And(Box::new(l), Box::new(self.not()?));
        }
        Ok(l)
    }

    fn not(&mut self) -> Result<Label> {
        if self.cur.peek() == Some(&Tok::Bang) {
            self.cur.next();
            return Ok(Label::Not(Box::new(self.not()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Label> {
        let line = self.cur.line();
        match self.cur.next() {
            Some(Tok::Ident(w)) if w == "t" => Ok(Label::True),
            Some(Tok::Ident(w)) if w == "f" => Ok(Label::False),
            Some(Tok::Int(i)) if *i < self.num_aps => Ok(Label::Ap(*i)),
            Some(Tok::Int(i)) => Err(syntax(line, format!("atomic proposition {i} out of range"))),
            Some(Tok::Alias(a)) => self
                .aliases
                .get(a)
                .cloned()
                .ok_or_else(|| syntax(line, format!("unknown alias @{a}"))),
            Some(Tok::LParen) => {
                let l = self.or()?;
                self.cur.expect(&Tok::RParen, "')'")?;
                Ok(l)
            }
            _ => Err(syntax(line, "malformed label expression")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AccKind {
    Buchi,
    ParityMinEven,
}

struct Header {
    states: Option<usize>,
    start: Vec<usize>,
    aps: Vec<String>,
    aliases: HashMap<String, Label>,
    acc: AccKind,
}

fn parse_header(cur: &mut Cursor<'_>) -> Result<Header> {
    let mut states = None;
    let mut start = Vec::new();
    let mut aps: Option<Vec<String>> = None;
    let mut aliases = HashMap::new();
    let mut acc_name: Option<(Vec<Tok>, usize)> = None;
    let mut acceptance: Option<(Vec<Tok>, usize)> = None;
    let mut seen_hoa = false;

    loop {
        let line = cur.line();
        let name = match cur.next() {
            Some(Tok::Header(h)) => h.clone(),
            Some(Tok::Body) => break,
            Some(_) => return Err(syntax(line, "expected a header item or --BODY--")),
            None => return Err(syntax(line, "missing --BODY--")),
        };
        let item_start = cur.pos;
        while !matches!(cur.peek(), Some(Tok::Header(_)) | Some(Tok::Body) | None) {
            cur.next();
        }
        let vals: Vec<Tok> = cur.toks[item_start..cur.pos].iter().map(|t| t.0.clone()).collect();
        match name.as_str() {
            "HOA" => {
                if vals != [Tok::Ident("v1".into())] {
                    return Err(syntax(line, "only HOA v1 is supported"));
                }
                seen_hoa = true;
            }
            "States" => match vals.as_slice() {
                [Tok::Int(n)] => states = Some(*n),
                _ => return Err(syntax(line, "States: expects one integer")),
            },
            "Start" => match vals.as_slice() {
                [Tok::Int(s)] => start.push(*s),
                _ => return Err(syntax(line, "Start: expects a single state (no conjunctions)")),
            },
            "AP" => {
                let (n, names) = match vals.split_first() {
                    Some((Tok::Int(n), rest)) => (*n, rest),
                    _ => return Err(syntax(line, "AP: expects a count")),
                };
                let names: Vec<String> = names
                    .iter()
                    .map(|t| match t {
                        Tok::Str(s) => Ok(s.clone()),
                        _ => Err(syntax(line, "AP names must be strings")),
                    })
                    .collect::<Result<_>>()?;
                if names.len() != n {
                    return Err(syntax(line, "AP count does not match the names given"));
                }
                if n > MAX_APS {
                    return Err(Error::TooManyAps(n));
                }
                aps = Some(names);
            }
            "Alias" => {
                let num_aps = aps.as_ref().map_or(0, Vec::len);
                let sub: Vec<(Tok, usize)> = vals.iter().map(|t| (t.clone(), line)).collect();
                let mut c = Cursor { toks: &sub, pos: 0 };
                let alias = match c.next() {
                    Some(Tok::Alias(a)) => a.clone(),
                    _ => return Err(syntax(line, "Alias: expects @name")),
                };
                let label = LabelParser {
                    cur: &mut c,
                    num_aps,
                    aliases: &aliases,
                }
                .or()?;
                aliases.insert(alias, label);
            }
            "acc-name" => acc_name = Some((vals, line)),
            "Acceptance" => acceptance = Some((vals, line)),
            _ => {}
        }
    }
    if !seen_hoa {
        return Err(syntax(1, "missing HOA: v1 header"));
    }

    let acc = match (&acc_name, &acceptance) {
        (Some((v, line)), _) => match v.as_slice() {
            [Tok::Ident(b)] if b == "Buchi" => AccKind::Buchi,
            [Tok::Ident(p), Tok::Ident(m), Tok::Ident(e), Tok::Int(_)]
                if p == "parity" && m == "min" && e == "even" =>
            {
                AccKind::ParityMinEven
            }
            _ => {
                let shown: Vec<String> = v.iter().map(tok_text).collect();
                let _ = line;
                return Err(Error::UnsupportedAcceptance(shown.join(" ")));
            }
        },
        (None, Some((v, _))) => {
            let inf0 = [
                Tok::Int(1),
                Tok::Ident("Inf".into()),
                Tok::LParen,
                Tok::Int(0),
                Tok::RParen,
            ];
            if v.as_slice() == inf0 {
                AccKind::Buchi
            } else {
                let shown: Vec<String> = v.iter().map(tok_text).collect();
                return Err(Error::UnsupportedAcceptance(shown.join(" ")));
            }
        }
        (None, None) => return Err(Error::UnsupportedAcceptance("none given".into())),
    };

    Ok(Header {
        states,
        start,
        aps: aps.unwrap_or_default(),
        aliases,
        acc,
    })
}

fn tok_text(t: &Tok) -> String {
    match t {
        Tok::Header(h) => format!("{h}:"),
        Tok::Ident(s) => s.clone(),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Int(i) => i.to_string(),
        Tok::Alias(a) => format!("@{a}"),
        Tok::LBrack => "[".into(),
        Tok::RBrack => "]".into(),
        Tok::LBrace => "{".into(),
        Tok::RBrace => "}".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Bang => "!".into(),
        Tok::Amp => "&".into(),
        Tok::Bar => "|".into(),
        Tok::Body => "--BODY--".into(),
        Tok::End => "--END--".into(),
    }
}

fn acc_sig(cur: &mut Cursor<'_>) -> Result<Vec<usize>> {
    let mut sets = Vec::new();
    if cur.peek() == Some(&Tok::LBrace) {
        cur.next();
        loop {
            let line = cur.line();
            match cur.next() {
                Some(Tok::Int(i)) => sets.push(*i),
                Some(Tok::RBrace) => break,
                _ => return Err(syntax(line, "malformed acceptance signature")),
            }
        }
    }
    Ok(sets)
}

struct RawEdge {
    src: usize,
    syms: Vec<usize>,
    dst: usize,
    acc: Vec<usize>,
    line: usize,
}

/// Parses a HOA document into a Büchi or parity automaton.
pub fn parse_hoa(text: &str) -> Result<Automaton> {
    let toks = lex(text)?;
    let mut cur = Cursor { toks: &toks, pos: 0 };
    let header = parse_header(&mut cur)?;
    let alphabet = Alphabet::new(header.aps.clone());
    let num_aps = header.aps.len();

    let mut state_acc: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut names: HashMap<usize, String> = HashMap::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut current: Option<usize> = None;
    let mut max_state = 0usize;
    loop {
        let line = cur.line();
        match cur.peek() {
            Some(Tok::End) => {
                cur.next();
                break;
            }
            Some(Tok::Header(h)) if h == "State" => {
                cur.next();
                let s = cur.int("state number")?;
                if let Some(Tok::Str(name)) = cur.peek() {
                    names.insert(s, name.clone());
                    cur.next();
                }
                let acc = acc_sig(&mut cur)?;
                if !acc.is_empty() {
                    state_acc.insert(s, acc);
                }
                max_state = max_state.max(s + 1);
                current = Some(s);
            }
            Some(Tok::LBrack) => {
                let src = current.ok_or_else(|| syntax(line, "edge before any State:"))?;
                cur.next();
                let label = LabelParser {
                    cur: &mut cur,
                    num_aps,
                    aliases: &header.aliases,
                }
                .or()?;
                cur.expect(&Tok::RBrack, "']'")?;
                let dst = cur.int("edge target")?;
                if cur.peek() == Some(&Tok::Amp) {
                    return Err(syntax(line, "universal branching is not supported"));
                }
                let acc = acc_sig(&mut cur)?;
                max_state = max_state.max(dst + 1);
                let syms = alphabet.symbols().filter(|s| label.eval(*s)).collect();
                edges.push(RawEdge {
                    src,
                    syms,
                    dst,
                    acc,
                    line,
                });
            }
            Some(Tok::Int(_)) => {
                return Err(syntax(line, "implicit edge labels are not supported"));
            }
            None => return Err(syntax(line, "missing --END--")),
            Some(_) => return Err(syntax(line, "unexpected token in body")),
        }
    }

    let n = match header.states {
        Some(n) => {
            if max_state > n {
                return Err(syntax(1, "state number exceeds States:"));
            }
            n
        }
        None => max_state.max(header.start.iter().map(|s| s + 1).max().unwrap_or(0)),
    };
    if header.start.iter().any(|s| *s >= n) {
        return Err(syntax(1, "Start: state out of range"));
    }

    match header.acc {
        AccKind::Buchi => {
            if header.start.is_empty() {
                return Err(syntax(1, "Büchi automaton without Start:"));
            }
            let mut nba = Nba::new(n, alphabet);
            for s in &header.start {
                nba.add_initial(*s);
            }
            for (s, acc) in &state_acc {
                if acc.iter().any(|a| *a != 0) {
                    return Err(syntax(1, "Büchi acceptance uses only set 0"));
                }
                nba.set_accepting(*s, true);
            }
            for e in &edges {
                if !e.acc.is_empty() {
                    return Err(Error::UnsupportedAcceptance(
                        "transition-based Büchi acceptance".into(),
                    ));
                }
                for a in &e.syms {
                    nba.add_edge(e.src, *a, e.dst);
                }
            }
            for (s, name) in names {
                nba.set_name(s, name);
            }
            Ok(Automaton::Nba(nba))
        }
        AccKind::ParityMinEven => {
            if header.start.len() != 1 {
                return Err(syntax(1, "parity automaton needs exactly one Start: state"));
            }
            if n == 0 {
                return Err(syntax(1, "parity automaton without states"));
            }
            let syms = alphabet.len();
            let mut dpa = Dpa::new(n, alphabet, header.start[0]);
            let mut set = vec![false; n * syms];
            for e in &edges {
                let prio = e
                    .acc
                    .iter()
                    .chain(state_acc.get(&e.src).into_iter().flatten())
                    .min()
                    .copied()
                    .ok_or_else(|| syntax(e.line, "parity edge without priority"))?;
                for a in &e.syms {
                    if set[e.src * syms + a] {
                        return Err(Error::NotDeterministic { state: e.src });
                    }
                    set[e.src * syms + a] = true;
                    dpa.set_edge(e.src, *a, e.dst, prio as u32);
                }
            }
            if let Some(i) = set.iter().position(|b| !b) {
                return Err(Error::Incomplete { state: i / syms });
            }
            Ok(Automaton::Dpa(dpa))
        }
    }
}

pub fn parse_nba(text: &str) -> Result<Nba> {
    match parse_hoa(text)? {
        Automaton::Nba(n) => Ok(n),
        Automaton::Dpa(_) => Err(Error::WrongKind { expected: "Büchi" }),
    }
}

pub fn parse_dpa(text: &str) -> Result<Dpa> {
    match parse_hoa(text)? {
        Automaton::Dpa(d) => Ok(d),
        Automaton::Nba(_) => Err(Error::WrongKind { expected: "parity" }),
    }
}

fn write_aps(out: &mut String, al: &Alphabet) {
    let _ = write!(out, "AP: {}", al.aps().len());
    for ap in al.aps() {
        let _ = write!(out, " \"{}\"", ap.replace('\\', "\\\\").replace('"', "\\\""));
    }
    out.push('\n');
}

/// Label for a set of symbols: `t`, or a disjunction of minterms.
fn label_for(al: &Alphabet, syms: &[usize]) -> String {
    if syms.len() == al.len() {
        return "t".into();
    }
    let k = al.aps().len();
    syms.iter()
        .map(|s| {
            (0..k)
                .map(|i| if s >> i & 1 == 1 { format!("{i}") } else { format!("!{i}") })
                .collect::<Vec<_>>()
                .join("&")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

pub fn emit_nba(nba: &Nba) -> String {
    let al = nba.alphabet();
    let mut out = String::from("HOA: v1\n");
    let _ = writeln!(out, "States: {}", nba.num_states());
    for s in nba.initial() {
        let _ = writeln!(out, "Start: {s}");
    }
    write_aps(&mut out, al);
    out.push_str("acc-name: Buchi\nAcceptance: 1 Inf(0)\n");
    out.push_str("properties: trans-labels explicit-labels state-acc\n--BODY--\n");
    for p in 0..nba.num_states() {
        let _ = write!(out, "State: {p}");
        if let Some(name) = nba.name(p) {
            let _ = write!(out, " \"{name}\"");
        }
        if nba.is_accepting(p) {
            out.push_str(" {0}");
        }
        out.push('\n');
        for q in 0..nba.num_states() {
            let syms: Vec<usize> = al.symbols().filter(|a| nba.succ(p, *a).contains(q)).collect();
            if !syms.is_empty() {
                let _ = writeln!(out, "[{}] {q}", label_for(al, &syms));
            }
        }
    }
    out.push_str("--END--\n");
    out
}

/// `parity min even d` acceptance formula over sets `0..d`.
pub fn parity_min_even_formula(d: usize) -> String {
    fn go(i: usize, d: usize) -> String {
        let here = if i.is_multiple_of(2) { format!("Inf({i})") } else { format!("Fin({i})") };
        if i + 1 == d {
            return here;
        }
        let rest = go(i + 1, d);
        let rest = if i + 2 == d { rest } else { format!("({rest})") };
        if i.is_multiple_of(2) {
            format!("{here} | {rest}")
        } else {
            format!("{here} & {rest}")
        }
    }
    go(0, d.max(1))
}

/// Emits a DPA after mapping priorities to a dense, parity-preserving range.
pub fn emit_dpa(dpa: &Dpa) -> String {
    let dpa = compress_priorities(dpa);
    let al = dpa.alphabet();
    let d = dpa.priorities().iter().max().map_or(1, |m| *m as usize + 1);
    let mut out = String::from("HOA: v1\n");
    let _ = writeln!(out, "States: {}", dpa.num_states());
    let _ = writeln!(out, "Start: {}", dpa.initial());
    write_aps(&mut out, al);
    let _ = writeln!(out, "acc-name: parity min even {d}");
    let _ = writeln!(out, "Acceptance: {d} {}", parity_min_even_formula(d));
    out.push_str("properties: trans-labels explicit-labels trans-acc complete deterministic\n");
    out.push_str("--BODY--\n");
    for p in 0..dpa.num_states() {
        let _ = writeln!(out, "State: {p}");
        let mut groups: Vec<((usize, u32), Vec<usize>)> = Vec::new();
        for a in al.symbols() {
            let key = (dpa.succ(p, a), dpa.priority(p, a));
            match groups.iter_mut().find(|g| g.0 == key) {
                Some(g) => g.1.push(a),
                None => groups.push((key, vec![a])),
            }
        }
        for ((q, pr), syms) in groups {
            let _ = writeln!(out, "[{}] {q} {{{pr}}}", label_for(al, &syms));
        }
    }
    out.push_str("--END--\n");
    out
}

pub fn emit_hoa(aut: &Automaton) -> String {
    match aut {
        Automaton::Nba(n) => emit_nba(n),
        Automaton::Dpa(d) => emit_dpa(d),
    }
}
