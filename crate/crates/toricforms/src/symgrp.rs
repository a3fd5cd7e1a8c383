//! Finite groups: matrix groups inside GL(n,Z) stored extensionally, abstract
//! presented groups enumerated by coset enumeration, subgroups,
//! centralizers, sign characters and homomorphisms up to conjugacy.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{is_unimodular, IntegerMatrix};

pub const DEFAULT_CLOSURE_CAP: usize = 1000;
pub const DEFAULT_SUBGROUP_CAP: usize = 48;
const COSET_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded cap of {0} elements")]
    ClosureExceedsCap(usize),
    #[error("group of order {0} exceeds the cap {1}")]
    GroupTooLarge(usize, usize),
    #[error("coset enumeration exceeded {0} cosets")]
    CosetCapExceeded(usize),
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("unknown builtin group {0:?}")]
    UnknownBuiltin(String),
    #[error("generator {0} is not unimodular")]
    NotUnimodular(usize),
    #[error("relator {0} does not map to the identity")]
    RelatorViolated(String),
    #[error("generator count mismatch: expected {0}, found {1}")]
    ArityMismatch(usize, usize),
    #[error("search space of {0} tuples exceeds the cap")]
    SearchTooLarge(u128),
}

/// A finite group given by its Cayley table. Element 0 is the identity and
/// elements are numbered in breadth-first order from the generators, so the
/// numbering agrees with the shortlex order of minimal words.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    gens: Vec<usize>,
    gen_names: Vec<String>,
    words: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Breadth-first closure of `gens` under right multiplication.
    pub fn from_generators<T, F>(
        identity: T,
        gens: &[T],
        names: &[String],
        mul: F,
        cap: usize,
    ) -> Result<(FiniteGroup, Vec<T>), GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        assert_eq!(gens.len(), names.len());
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < elems.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (gi, g) in gens.iter().enumerate() {
                let p = mul(&elems[i], g);
                let idx = match index.get(&p) {
                    Some(&k) => k,
                    None => {
                        if elems.len() >= cap {
                            return Err(GroupError::ClosureExceedsCap(cap));
                        }
                        let k = elems.len();
                        index.insert(p.clone(), k);
                        elems.push(p);
                        let mut w = words[i].clone();
                        w.push(gi);
                        words.push(w);
                        k
                    }
                };
                row.push(idx);
            }
            right.push(row);
            i += 1;
        }
        let n = elems.len();
        let gen_idx: Vec<usize> = (0..gens.len()).map(|gi| right[0][gi]).collect();
        // a*b: follow b's word from a through the right-multiplication table
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut c = a;
                for &g in &words[b] {
                    c = right[c][g];
                }
                table[a][b] = c;
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| table[a][b] == 0).expect("finite group has inverses");
        }
        Ok((
            FiniteGroup { mul: table, inv, gens: gen_idx, gen_names: names.to_vec(), words },
            elems,
        ))
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// x g x^{-1}
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Evaluates a word of generator letters (index, inverse flag).
    pub fn eval(&self, word: &[Letter]) -> usize {
        word.iter().fold(0, |acc, l| {
            let g = self.gens[l.gen];
            self.mul(acc, if l.inv { self.inv(g) } else { g })
        })
    }

    /// Shortlex word of an element, rendered with powers, e.g. `r^2s`.
    pub fn element_name(&self, g: usize) -> String {
        if g == 0 {
            return "1".to_string();
        }
        render_word(&self.words[g], &self.gen_names)
    }

    /// Smallest subgroup containing `set`, as a sorted element list.
    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut list = vec![0];
        let mut queue: VecDeque<usize> = VecDeque::from(vec![0]);
        while let Some(a) = queue.pop_front() {
            for &s in set {
                let p = self.mul(a, s);
                if !inside[p] {
                    inside[p] = true;
                    list.push(p);
                    queue.push_back(p);
                }
            }
        }
        list.sort_unstable();
        list
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: HashSet<usize> = set.iter().copied().collect();
        s.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    /// Greedy generating set of a subgroup, scanning elements in order.
    pub fn subgroup_generators(&self, sub: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &g in sub {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn centralizer(&self, set: &[usize]) -> Vec<usize> {
        self.elements()
            .filter(|&g| set.iter().all(|&s| self.mul(g, s) == self.mul(s, g)))
            .collect()
    }

    pub fn normalizer(&self, sub: &[usize]) -> Vec<usize> {
        let s: HashSet<usize> = sub.iter().copied().collect();
        self.elements().filter(|&x| sub.iter().all(|&h| s.contains(&self.conj(x, h)))).collect()
    }

    pub fn conjugate_subgroup(&self, x: usize, sub: &[usize]) -> Vec<usize> {
        let mut c: Vec<usize> = sub.iter().map(|&h| self.conj(x, h)).collect();
        c.sort_unstable();
        c
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut cls: Vec<usize> = self.elements().map(|x| self.conj(x, g)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls);
        }
        out
    }

    /// All subgroups, sorted by (order, element list).
    pub fn subgroups_all(&self, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        if self.order() > cap {
            return Err(GroupError::GroupTooLarge(self.order(), cap));
        }
        let mut cyclic: Vec<Vec<usize>> = self.elements().map(|g| self.closure(&[g])).collect();
        cyclic.sort();
        cyclic.dedup();
        let mut all: HashSet<Vec<usize>> = cyclic.iter().cloned().collect();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| a.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gens = a.clone();
                    gens.extend(c.iter().copied());
                    let j = self.closure(&gens);
                    if all.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Vec<usize>> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    pub fn conjugacy_classes_of_subgroups(&self, cap: usize) -> Result<Vec<Vec<Vec<usize>>>, GroupError> {
        let subs = self.subgroups_all(cap)?;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        for s in subs {
            if seen.contains(&s) {
                continue;
            }
            let mut cls: Vec<Vec<usize>> = self.elements().map(|x| self.conjugate_subgroup(x, &s)).collect();
            cls.sort();
            cls.dedup();
            for c in &cls {
                seen.insert(c.clone());
            }
            out.push(cls);
        }
        Ok(out)
    }

    /// Display name of a subgroup: `1`, `<w>` for cyclic ones (least
    /// generating element), otherwise `<a,b,...>` from greedy generators.
    pub fn subgroup_name(&self, sub: &[usize]) -> String {
        if sub.len() <= 1 {
            return "1".to_string();
        }
        if let Some(&g) = sub.iter().find(|&&g| g != 0 && self.element_order(g) == sub.len()) {
            return format!("<{}>", self.element_name(g));
        }
        let gens = self.subgroup_generators(sub);
        let names: Vec<String> = gens.iter().map(|&g| self.element_name(g)).collect();
        format!("<{}>", names.join(","))
    }

    /// Element-order statistics: sorted (order, count) pairs.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut m: HashMap<usize, usize> = HashMap::new();
        for g in self.elements() {
            *m.entry(self.element_order(g)).or_default() += 1;
        }
        let mut v: Vec<(usize, usize)> = m.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Left coset representatives of `sub`: the identity for `sub` itself,
    /// otherwise the least element (shortlex) of each coset, in that order.
    pub fn left_coset_reps(&self, sub: &[usize]) -> Vec<usize> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in sub {
                covered[self.mul(g, h)] = true;
            }
        }
        reps
    }
}

pub fn render_word(word: &[usize], names: &[String]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let g = word[i];
        let mut k = 1;
        while i + k < word.len() && word[i + k] == g {
            k += 1;
        }
        out.push_str(&names[g]);
        if k > 1 {
            out.push_str(&format!("^{k}"));
        }
        i += k;
    }
    out
}

/// A generator letter, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

/// Parses words like `srsr`, `r^2s`, `a^-1 b a`, `g1^3g2` over the given
/// generator names (longest name matched first).
pub fn parse_word(text: &str, names: &[String]) -> Result<Vec<Letter>, GroupError> {
    let bad = || GroupError::BadWord(text.to_string());
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace() && *c != '*' && *c != '.').collect();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(names[i].chars().count()));
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '1' && out.is_empty() && chars.len() == 1 {
            return Ok(vec![]);
        }
        let mut matched = None;
        for &gi in &order {
            let nc: Vec<char> = names[gi].chars().collect();
            if chars.len() >= i + nc.len() && chars[i..i + nc.len()] == nc[..] {
                matched = Some((gi, nc.len()));
                break;
            }
        }
        let (gi, len) = matched.ok_or_else(bad)?;
        i += len;
        let mut exp: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            exp = s.parse().map_err(|_| bad())?;
        }
        for _ in 0..exp.unsigned_abs() {
            out.push(Letter { gen: gi, inv: exp < 0 });
        }
    }
    Ok(out)
}

/// An abstract group given by generators and relators.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub generator_names: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
    pub order: usize,
    group: FiniteGroup,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin { builtin: String },
    Presented { generators: Vec<String>, relators: Vec<String> },
}

impl PresentedGroup {
    pub fn new(names: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| parse_word(r, &names)).collect::<Result<Vec<_>, _>>()?;
        Self::from_words(names, rels)
    }

    pub fn from_words(names: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Self, GroupError> {
        let group = todd_coxeter(&names, &relators)?;
        Ok(PresentedGroup { order: group.order(), generator_names: names, relators, group })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Builtin { builtin } => builtin_group(builtin),
            GroupSpec::Presented { generators, relators } => {
                let names: Vec<&str> = generators.iter().map(|s| s.as_str()).collect();
                let rels: Vec<&str> = relators.iter().map(|s| s.as_str()).collect();
                Self::new(&names, &rels)
            }
        }
    }

    /// The enumerated group; its generators are the presentation's.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn relator_text(&self, i: usize) -> String {
        self.relators[i]
            .iter()
            .map(|l| {
                if l.inv {
                    format!("{}^-1", self.generator_names[l.gen])
                } else {
                    self.generator_names[l.gen].clone()
                }
            })
            .collect()
    }
}

/// Coset enumeration over the trivial subgroup (HLT strategy with
/// coincidence processing); returns the regular representation as a
/// Cayley table.
fn todd_coxeter(names: &[String], relators: &[Vec<Letter>]) -> Result<FiniteGroup, GroupError> {
    let k = names.len();
    let ncols = 2 * k;
    const NONE: usize = usize::MAX;
    let col = |l: &Letter| 2 * l.gen + usize::from(l.inv);
    let inv_col = |c: usize| c ^ 1;
    let rels: Vec<Vec<usize>> = relators.iter().map(|r| r.iter().map(col).collect()).collect();

    struct St {
        table: Vec<Vec<usize>>,
        parent: Vec<usize>,
        queue: VecDeque<usize>,
    }
    impl St {
        fn rep(&mut self, mut c: usize) -> usize {
            let mut r = c;
            while self.parent[r] != r {
                r = self.parent[r];
            }
            while self.parent[c] != r {
                let nxt = self.parent[c];
                self.parent[c] = r;
                c = nxt;
            }
            r
        }
        fn merge(&mut self, a: usize, b: usize) {
            let (a, b) = (self.rep(a), self.rep(b));
            if a == b {
                return;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            self.queue.push_back(drop);
        }
        fn coincidence(&mut self, a: usize, b: usize, ncols: usize) {
            self.merge(a, b);
            while let Some(e) = self.queue.pop_front() {
                for x in 0..ncols {
                    let f = self.table[e][x];
                    if f == NONE {
                        continue;
                    }
                    let xi = x ^ 1;
                    if self.table[f][xi] == e {
                        self.table[f][xi] = NONE;
                    }
                    let e1 = self.rep(e);
                    let f1 = self.rep(f);
                    if self.table[e1][x] != NONE {
                        let t = self.table[e1][x];
                        self.merge(f1, t);
                    } else if self.table[f1][xi] != NONE {
                        let t = self.table[f1][xi];
                        self.merge(e1, t);
                    } else {
                        self.table[e1][x] = f1;
                        self.table[f1][xi] = e1;
                    }
                }
            }
        }
    }

    let mut st = St { table: vec![vec![NONE; ncols]], parent: vec![0], queue: VecDeque::new() };
    let define = |st: &mut St, c: usize, x: usize| -> Result<usize, GroupError> {
        if st.table.len() >= COSET_CAP {
            return Err(GroupError::CosetCapExceeded(COSET_CAP));
        }
        let d = st.table.len();
        st.table.push(vec![NONE; ncols]);
        st.parent.push(d);
        st.table[c][x] = d;
        st.table[d][x ^ 1] = c;
        Ok(d)
    };

    let mut c = 0;
    while c < st.table.len() {
        if st.parent[c] == c {
            for r in &rels {
                if st.parent[c] != c {
                    break;
                }
                // scan and fill
                loop {
                    let (mut f, mut b) = (c, c);
                    let (mut i, mut j) = (0usize, r.len() as isize - 1);
                    while (i as isize) <= j && st.table[f][r[i]] != NONE {
                        f = st.table[f][r[i]];
                        i += 1;
                    }
                    if (i as isize) > j {
                        if f != b {
                            st.coincidence(f, b, ncols);
                        }
                        break;
                    }
                    while j >= i as isize && st.table[b][inv_col(r[j as usize])] != NONE {
                        b = st.table[b][inv_col(r[j as usize])];
                        j -= 1;
                    }
                    if j < i as isize {
                        st.coincidence(f, b, ncols);
                        break;
                    } else if j == i as isize {
                        st.table[f][r[i]] = b;
                        st.table[b][inv_col(r[i])] = f;
                        break;
                    } else {
                        define(&mut st, f, r[i])?;
                    }
                }
            }
            if st.parent[c] == c {
                for x in 0..ncols {
                    if st.table[c][x] == NONE {
                        define(&mut st, c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    // breadth-first renumbering of live cosets gives shortlex words
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut live = vec![0usize];
    number.insert(0, 0);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < live.len() {
        let cc = live[i];
        let mut row = Vec::with_capacity(k);
        for g in 0..k {
            let raw = st.table[cc][2 * g];
            let t = st.rep(raw);
            let idx = match number.get(&t) {
                Some(&x) => x,
                None => {
                    let x = live.len();
                    number.insert(t, x);
                    live.push(t);
                    let mut w = words[i].clone();
                    w.push(g);
                    words.push(w);
                    x
                }
            };
            row.push(idx);
        }
        right.push(row);
        i += 1;
    }
    let n = live.len();
    if n > DEFAULT_CLOSURE_CAP * 10 {
        return Err(GroupError::CosetCapExceeded(n));
    }
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut x = a;
            for &g in &words[b] {
                x = right[x][g];
            }
            table[a][b] = x;
        }
    }
    let mut inv = vec![0; n];
    for a in 0..n {
        inv[a] = (0..n).find(|&b| table[a][b] == 0).expect("group inverse");
    }
    let gens = (0..k).map(|g| right[0][g]).collect();
    Ok(FiniteGroup { mul: table, inv, gens, gen_names: names.to_vec(), words })
}

fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, '_' | '{' | '}' | ' ' | '\'' | '$' | '\\'))
        .collect::<String>()
        .replace('×', "x")
        .replace("times", "x")
        .to_lowercase()
}

enum Factor {
    Cyclic(u64),
    Dihedral(u64),
    A4,
    S4,
}

fn parse_factors(name: &str) -> Option<Vec<Factor>> {
    let n = normalize_name(name);
    if n == "trivial" || n == "1" {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    for part in n.split('x') {
        let (base, times) = match part.split_once('^') {
            Some((b, e)) => (b, e.parse::<usize>().ok()?),
            None => (part, 1),
        };
        let f = if base == "a4" {
            Factor::A4
        } else if base == "s4" {
            Factor::S4
        } else if let Some(m) = base.strip_prefix('z').or_else(|| base.strip_prefix('c')) {
            Factor::Cyclic(m.parse().ok()?)
        } else {
            let m = base.strip_prefix('d')?;
            Factor::Dihedral(m.parse().ok()?)
        };
        for _ in 0..times {
            out.push(match &f {
                Factor::Cyclic(m) => Factor::Cyclic(*m),
                Factor::Dihedral(m) => Factor::Dihedral(*m),
                Factor::A4 => Factor::A4,
                Factor::S4 => Factor::S4,
            });
        }
    }
    Some(out)
}

/// Builtin presentations: `Zm`/`Cm`, `D2m`, `A4`, `S4`, products such as
/// `Z2xZ2`, `Z4xZ2`, `Z2^3`, `A4xZ2`, `S4xZ2`, `D8xZ2`.
pub fn builtin_group(name: &str) -> Result<PresentedGroup, GroupError> {
    let unknown = || GroupError::UnknownBuiltin(name.to_string());
    let factors = parse_factors(name).ok_or_else(unknown)?;
    let all_cyclic = factors.iter().all(|f| matches!(f, Factor::Cyclic(_)));
    let mut names: Vec<String> = Vec::new();
    let mut rels: Vec<String> = Vec::new();
    let mut blocks: Vec<Vec<String>> = Vec::new();
    let spare = ["z", "w", "v", "u", "t"];
    let xyz = ["x", "y", "z", "w", "v", "u"];
    let mut spare_i = 0;
    let noncyclic = factors.iter().filter(|f| !matches!(f, Factor::Cyclic(_))).count();
    for (fi, f) in factors.iter().enumerate() {
        let suffix = if noncyclic > 1 { (fi + 1).to_string() } else { String::new() };
        let mut block = Vec::new();
        match f {
            Factor::Cyclic(m) => {
                if *m == 0 {
                    return Err(unknown());
                }
                let g = if factors.len() == 1 {
                    "c".to_string()
                } else if all_cyclic {
                    xyz.get(fi).ok_or_else(unknown)?.to_string()
                } else {
                    let s = spare.get(spare_i).ok_or_else(unknown)?.to_string();
                    spare_i += 1;
                    s
                };
                rels.push(format!("{g}^{m}"));
                block.push(g);
            }
            Factor::Dihedral(m) => {
                if *m == 0 || m % 2 == 1 {
                    return Err(unknown());
                }
                let (r, s) = (format!("r{suffix}"), format!("s{suffix}"));
                rels.push(format!("{r}^{}", m / 2));
                rels.push(format!("{s}^2"));
                rels.push(format!("{s}{r}{s}{r}"));
                block.push(r);
                block.push(s);
            }
            Factor::A4 | Factor::S4 => {
                let (a, b) = (format!("a{suffix}"), format!("b{suffix}"));
                let ord = if matches!(f, Factor::A4) { 3 } else { 4 };
                rels.push(format!("{a}^{ord}"));
                rels.push(format!("{b}^2"));
                rels.push(format!("{a}{b}{a}{b}{a}{b}"));
                block.push(a);
                block.push(b);
            }
        }
        names.extend(block.iter().cloned());
        blocks.push(block);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            for a in &blocks[i] {
                for b in &blocks[j] {
                    rels.push(format!("{a}{b}{a}^-1{b}^-1"));
                }
            }
        }
    }
    if names.is_empty() {
        names.push("c".into());
        rels.push("c".into());
    }
    let n: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let r: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
    PresentedGroup::new(&n, &r)
}

/// A finite subgroup of GL(n, Z), stored extensionally.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub n: usize,
    pub elements: Vec<IntegerMatrix>,
    pub generator_indices: Vec<usize>,
    group: FiniteGroup,
    index: HashMap<IntegerMatrix, usize>,
}

impl MatrixGroup {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &IntegerMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn generators(&self) -> Vec<IntegerMatrix> {
        self.generator_indices.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn contains(&self, m: &IntegerMatrix) -> bool {
        self.index.contains_key(m)
    }
}

pub fn generate_closure(generators: &[IntegerMatrix], cap: usize) -> Result<MatrixGroup, GroupError> {
    let names: Vec<String> = (1..=generators.len()).map(|i| format!("g{i}")).collect();
    generate_closure_named(generators, &names, cap)
}

pub fn generate_closure_named(
    generators: &[IntegerMatrix],
    names: &[String],
    cap: usize,
) -> Result<MatrixGroup, GroupError> {
    let n = generators.first().map_or(0, |g| g.rows());
    for (i, g) in generators.iter().enumerate() {
        if !g.is_square() || g.rows() != n || !is_unimodular(g) {
            return Err(GroupError::NotUnimodular(i));
        }
    }
    let (group, elements) =
        FiniteGroup::from_generators(IntegerMatrix::identity(n), generators, names, |a, b| a.mul(b), cap)?;
    let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let generator_indices = group.generators().to_vec();
    Ok(MatrixGroup { n, elements, generator_indices, group, index })
}

/// A sign character on a subgroup: `signs[i]` is the value on `subgroup[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub subgroup: Vec<usize>,
    pub signs: Vec<i8>,
}

impl Character {
    pub fn trivial(subgroup: &[usize]) -> Self {
        Character { subgroup: subgroup.to_vec(), signs: vec![1; subgroup.len()] }
    }

    pub fn value(&self, g: usize) -> Option<i8> {
        self.subgroup.binary_search(&g).ok().map(|i| self.signs[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    /// The canonical subgroup: elements acting trivially.
    pub fn kernel(&self) -> Vec<usize> {
        self.subgroup.iter().zip(&self.signs).filter(|(_, &s)| s == 1).map(|(&g, _)| g).collect()
    }

    pub fn restrict(&self, sub: &[usize]) -> Character {
        Character {
            subgroup: sub.to_vec(),
            signs: sub.iter().map(|&g| self.value(g).expect("restriction to a subgroup")).collect(),
        }
    }
}

/// All homomorphisms from the subgroup `sub` (sorted) to {±1}, in
/// lexicographic order of their sign vectors on the greedy generators
/// (+ before -).
pub fn enumerate_characters(g: &FiniteGroup, sub: &[usize]) -> Vec<Character> {
    let gens = g.subgroup_generators(sub);
    let k = gens.len();
    let mut out = Vec::new();
    'mask: for mask in 0u64..(1u64 << k) {
        let sign_of = |i: usize| -> i8 {
            if mask >> (k - 1 - i) & 1 == 1 {
                -1
            } else {
                1
            }
        };
        let mut val: HashMap<usize, i8> = HashMap::new();
        val.insert(0, 1);
        let mut queue = VecDeque::from(vec![0usize]);
        while let Some(h) = queue.pop_front() {
            let vh = val[&h];
            for (i, &x) in gens.iter().enumerate() {
                let p = g.mul(h, x);
                let vp = vh * sign_of(i);
                match val.get(&p) {
                    Some(&v) if v != vp => continue 'mask,
                    Some(_) => {}
                    None => {
                        val.insert(p, vp);
                        queue.push_back(p);
                    }
                }
            }
        }
        let signs: Vec<i8> = sub.iter().map(|h| val[h]).collect();
        let ch = Character { subgroup: sub.to_vec(), signs };
        // multiplicativity on all pairs
        let ok = sub.iter().all(|&a| {
            sub.iter().all(|&b| ch.value(g.mul(a, b)) == Some(ch.value(a).unwrap() * ch.value(b).unwrap()))
        });
        if ok {
            out.push(ch);
        }
    }
    out
}

/// Isomorphism types recognised by [`identify_isomorphism_type`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoType {
    Trivial,
    Cyclic(usize),
    Abelian(Vec<usize>),
    Dihedral(usize),
    DihedralTimesZ2(usize),
    A4,
    S4,
    A4xZ2,
    S4xZ2,
    Other { order: usize, abelian: bool, profile: Vec<(usize, usize)> },
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoType::Trivial => write!(f, "trivial"),
            IsoType::Cyclic(m) => write!(f, "Z_{m}"),
            IsoType::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().rev().map(|d| format!("Z_{d}")).collect();
                write!(f, "{}", parts.join("×"))
            }
            IsoType::Dihedral(m) => write!(f, "D_{m}"),
            IsoType::DihedralTimesZ2(m) => write!(f, "D_{m}×Z_2"),
            IsoType::A4 => write!(f, "A_4"),
            IsoType::S4 => write!(f, "S_4"),
            IsoType::A4xZ2 => write!(f, "A_4×Z_2"),
            IsoType::S4xZ2 => write!(f, "S_4×Z_2"),
            IsoType::Other { order, abelian, profile } => {
                write!(f, "other(order {order}, abelian {abelian}, orders {profile:?})")
            }
        }
    }
}

impl IsoType {
    /// Type named by a label such as `D_8`, `C_4`, `Z_2×Z_2`, `D_4` (Klein),
    /// `D_2` (= Z_2) or `A_4×Z_2`.
    pub fn from_name(name: &str) -> Option<IsoType> {
        let p = builtin_group(name).ok()?;
        Some(identify_isomorphism_type(p.group()))
    }

    pub fn matches_name(&self, name: &str) -> bool {
        IsoType::from_name(name).as_ref() == Some(self)
    }
}

fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    // invariant factor lists d1 | d2 | ... with product n, d1 > 1
    fn rec(rest: usize, min_div: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in 2..=rest {
            if !rest.is_multiple_of(d) {
                continue;
            }
            if let Some(&last) = acc.last() {
                if d % last != 0 {
                    continue;
                }
            }
            if d < min_div {
                continue;
            }
            // remaining factors must be multiples of d
            let r = rest / d;
            if r != 1 && !r.is_multiple_of(d) {
                continue;
            }
            acc.push(d);
            rec(r, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 2, &mut Vec::new(), &mut out);
    out
}

fn abelian_profile(factors: &[usize]) -> Vec<(usize, usize)> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    let total: usize = factors.iter().product();
    for idx in 0..total {
        let mut rem = idx;
        let mut ord = 1usize;
        for &d in factors {
            let x = rem % d;
            rem /= d;
            ord = ord.lcm(&(d / x.gcd(&d)));
        }
        *counts.entry(ord).or_default() += 1;
    }
    let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
    v.sort_unstable();
    v
}

fn dihedral_profile(order: usize) -> Vec<(usize, usize)> {
    let m = order / 2;
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for k in 0..m {
        *counts.entry(m / k.gcd(&m)).or_default() += 1;
    }
    *counts.entry(2).or_default() += m;
    let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
    v.sort_unstable();
    v
}

fn times_z2(profile: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &(o, c) in profile {
        *counts.entry(o).or_default() += c;
        *counts.entry(o.lcm(&2)).or_default() += c;
    }
    let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
    v.sort_unstable();
    v
}

pub fn identify_isomorphism_type(g: &FiniteGroup) -> IsoType {
    let n = g.order();
    if n == 1 {
        return IsoType::Trivial;
    }
    let profile = g.order_profile();
    if g.is_abelian() {
        for t in abelian_types(n) {
            if abelian_profile(&t) == profile {
                return if t.len() == 1 { IsoType::Cyclic(n) } else { IsoType::Abelian(t) };
            }
        }
        return IsoType::Other { order: n, abelian: true, profile };
    }
    if n.is_multiple_of(2) {
        let m = n / 2;
        if let Some(rho) = g.elements().find(|&x| g.element_order(x) == m) {
            let rot = g.closure(&[rho]);
            if g.elements().all(|x| rot.binary_search(&x).is_ok() || g.element_order(x) == 2) {
                return IsoType::Dihedral(n);
            }
        }
    }
    let a4 = vec![(1, 1), (2, 3), (3, 8)];
    let s4 = vec![(1, 1), (2, 9), (3, 8), (4, 6)];
    if n == 12 && profile == a4 {
        return IsoType::A4;
    }
    if n == 24 && profile == s4 {
        return IsoType::S4;
    }
    if n == 24 && profile == times_z2(&a4) {
        return IsoType::A4xZ2;
    }
    if n == 48 && profile == times_z2(&s4) {
        return IsoType::S4xZ2;
    }
    if n.is_multiple_of(4) && (n / 4).is_multiple_of(2) && profile == times_z2(&dihedral_profile(n / 2)) {
        // an index-2 dihedral subgroup plus a central involution outside it
        let center = g.centralizer(&g.elements().collect::<Vec<_>>());
        if center.len() >= 2 {
            return IsoType::DihedralTimesZ2(n / 2);
        }
    }
    IsoType::Other { order: n, abelian: false, profile }
}

/// A homomorphism from a presented group into a matrix group.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: PresentedGroup,
    pub target: MatrixGroup,
    pub images: Vec<IntegerMatrix>,
}

impl GroupHom {
    pub fn new(source: PresentedGroup, target: MatrixGroup, images: Vec<IntegerMatrix>) -> Result<Self, GroupError> {
        if images.len() != source.generator_names.len() {
            return Err(GroupError::ArityMismatch(source.generator_names.len(), images.len()));
        }
        let hom = GroupHom { source, target, images };
        for (i, r) in hom.source.relators.iter().enumerate() {
            if !hom.eval_word(r).is_identity() {
                return Err(GroupError::RelatorViolated(hom.source.relator_text(i)));
            }
        }
        Ok(hom)
    }

    /// A homomorphism into the group generated by its own images.
    pub fn into_generated(source: PresentedGroup, images: Vec<IntegerMatrix>) -> Result<Self, GroupError> {
        let target = generate_closure(&images, DEFAULT_CLOSURE_CAP)?;
        Self::new(source, target, images)
    }

    pub fn eval_word(&self, w: &[Letter]) -> IntegerMatrix {
        let n = self.target.n;
        let mut m = IntegerMatrix::identity(n);
        for l in w {
            let g = &self.images[l.gen];
            let gi = if l.inv {
                crate::intlin::unimodular_inverse(g).expect("image is unimodular")
            } else {
                g.clone()
            };
            m = m.mul(&gi);
        }
        m
    }

    /// Image of every element of the source group, indexed as in
    /// `source.group()`.
    pub fn element_images(&self) -> Vec<IntegerMatrix> {
        let g = self.source.group();
        g.elements()
            .map(|e| {
                let w: Vec<Letter> = g.word(e).iter().map(|&x| Letter { gen: x, inv: false }).collect();
                self.eval_word(&w)
            })
            .collect()
    }
}

/// Kernel (as source element indices), image group, and the induced
/// injective homomorphism from the quotient presentation.
pub fn hom_kernel_image(phi: &GroupHom) -> Result<(Vec<usize>, MatrixGroup, GroupHom), GroupError> {
    let imgs = phi.element_images();
    let kernel: Vec<usize> = imgs.iter().enumerate().filter(|(_, m)| m.is_identity()).map(|(i, _)| i).collect();
    let image = generate_closure_named(&phi.images, &phi.source.generator_names, DEFAULT_CLOSURE_CAP)?;
    let g = phi.source.group();
    let mut rels = phi.source.relators.clone();
    for k in g.subgroup_generators(&kernel) {
        rels.push(g.word(k).iter().map(|&x| Letter { gen: x, inv: false }).collect());
    }
    let quotient = PresentedGroup::from_words(phi.source.generator_names.clone(), rels)?;
    let induced = GroupHom::new(quotient, phi.target.clone(), phi.images.clone())?;
    Ok((kernel, image, induced))
}

const HOM_SEARCH_CAP: u128 = 5_000_000;

/// One representative per conjugacy class of homomorphisms P -> Aut, the
/// lexicographically least image tuple of each orbit. Classes are listed by
/// image order, then representative.
pub fn enumerate_homs_up_to_conjugacy(p: &PresentedGroup, aut: &MatrixGroup) -> Result<Vec<GroupHom>, GroupError> {
    let g = aut.group();
    let k = p.generator_names.len();
    let n = g.order();
    let total = (n as u128).pow(k as u32);
    if total > HOM_SEARCH_CAP {
        return Err(GroupError::SearchTooLarge(total));
    }
    let eval = |tuple: &[usize], w: &[Letter]| -> usize {
        w.iter().fold(0, |acc, l| {
            let x = tuple[l.gen];
            g.mul(acc, if l.inv { g.inv(x) } else { x })
        })
    };
    let mut valid: Vec<Vec<usize>> = Vec::new();
    let mut tuple = vec![0usize; k];
    loop {
        if p.relators.iter().all(|r| eval(&tuple, r) == 0) {
            valid.push(tuple.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX || k == 0 {
            break;
        }
    }
    let key = |t: &[usize]| -> Vec<IntegerMatrix> { t.iter().map(|&x| aut.elements[x].clone()).collect() };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps: Vec<(usize, Vec<IntegerMatrix>)> = Vec::new();
    for t in &valid {
        if seen.contains(t) {
            continue;
        }
        let mut orbit: Vec<Vec<usize>> = g.elements().map(|x| t.iter().map(|&y| g.conj(x, y)).collect()).collect();
        orbit.sort();
        orbit.dedup();
        let best = orbit.iter().map(|o| key(o)).min().expect("nonempty orbit");
        for o in orbit {
            seen.insert(o);
        }
        let img_order = g.closure(t).len();
        reps.push((img_order, best));
    }
    reps.sort();
    reps.into_iter()
        .map(|(_, imgs)| GroupHom::new(p.clone(), aut.clone(), imgs))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn w9() -> Vec<IntegerMatrix> {
        vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]), m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]])]
    }

    fn w10() -> Vec<IntegerMatrix> {
        vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]), m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])]
    }

    #[test]
    fn closure_orders() {
        let b = m(&[&[0, 1], &[-1, 0]]);
        let j = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(generate_closure(&[b, j], 100).unwrap().order(), 8);
        assert_eq!(generate_closure(&w10(), 100).unwrap().order(), 6);
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(generate_closure(&[u], 100).unwrap_err(), GroupError::ClosureExceedsCap(100));
    }

    #[test]
    fn closure_is_closed() {
        let g = generate_closure(&w9(), 100).unwrap();
        for a in &g.elements {
            for b in &g.elements {
                assert!(g.contains(&a.mul(b)));
            }
        }
    }

    #[test]
    fn centralizers_in_w9() {
        let g = generate_closure(&w9(), 100).unwrap();
        let fg = g.group();
        let s = g.index_of(&w9()[1]).unwrap();
        assert_eq!(fg.centralizer(&[0, s]), vec![0, s]);
        let all: Vec<usize> = fg.elements().collect();
        assert_eq!(fg.centralizer(&all), vec![0]);
        assert_eq!(fg.centralizer(&[0]).len(), 6);
    }

    #[test]
    fn iso_types() {
        assert_eq!(identify_isomorphism_type(generate_closure(&w10(), 100).unwrap().group()), IsoType::Dihedral(6));
        let minus = IntegerMatrix::identity(2).neg();
        assert_eq!(identify_isomorphism_type(generate_closure(&[minus], 100).unwrap().group()), IsoType::Cyclic(2));
        let a = m(&[&[1, -1], &[1, 0]]);
        let j = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(identify_isomorphism_type(generate_closure(&[a, j], 100).unwrap().group()), IsoType::Dihedral(12));
        assert!(IsoType::Cyclic(2).matches_name("D_2"));
        assert!(IsoType::Abelian(vec![2, 2]).matches_name("D_4"));
        assert!(IsoType::Abelian(vec![2, 2]).matches_name("Z_2×Z_2"));
        assert!(IsoType::Trivial.matches_name("C_1"));
    }

    #[test]
    fn builtins_have_expected_orders() {
        for (name, order) in [
            ("Z2", 2),
            ("Z4", 4),
            ("D6", 6),
            ("D8", 8),
            ("D12", 12),
            ("Z2xZ2", 4),
            ("Z4xZ2", 8),
            ("Z2^3", 8),
            ("A4", 12),
            ("S4", 24),
            ("A4xZ2", 24),
            ("S4xZ2", 48),
            ("D8xZ2", 16),
            ("D12xZ2", 24),
            ("Z6xZ2", 12),
            ("trivial", 1),
        ] {
            let p = builtin_group(name).unwrap();
            assert_eq!(p.order, order, "{name}");
        }
        assert_eq!(identify_isomorphism_type(builtin_group("A4xZ2").unwrap().group()), IsoType::A4xZ2);
        assert_eq!(identify_isomorphism_type(builtin_group("S4xZ2").unwrap().group()), IsoType::S4xZ2);
        assert_eq!(identify_isomorphism_type(builtin_group("D8xZ2").unwrap().group()), IsoType::DihedralTimesZ2(8));
        assert_eq!(identify_isomorphism_type(builtin_group("D12xZ2").unwrap().group()), IsoType::DihedralTimesZ2(12));
        assert_eq!(identify_isomorphism_type(builtin_group("Z2^3").unwrap().group()), IsoType::Abelian(vec![2, 2, 2]));
    }

    #[test]
    fn custom_presentation() {
        let p = PresentedGroup::new(&["r", "s"], &["rrr", "ss", "srsr"]).unwrap();
        assert_eq!(p.order, 6);
        let q = PresentedGroup::new(&["a", "b"], &["a^4", "b^2", "(ab)"]);
        assert!(q.is_err());
        let q = PresentedGroup::new(&["a", "b"], &["a^2", "b^2", "abab"]).unwrap();
        assert_eq!(q.order, 4);
    }

    #[test]
    fn characters() {
        let g = generate_closure(&w9(), 100).unwrap();
        let fg = g.group();
        let s = g.index_of(&w9()[1]).unwrap();
        let mut sub = vec![0, s];
        sub.sort();
        assert_eq!(enumerate_characters(fg, &sub).len(), 2);
        let r = g.index_of(&w9()[0]).unwrap();
        let z3 = fg.closure(&[r]);
        assert_eq!(enumerate_characters(fg, &z3).len(), 1);
        let all: Vec<usize> = fg.elements().collect();
        let chars = enumerate_characters(fg, &all);
        assert_eq!(chars.len(), 2);
        let sign = &chars[1];
        for &x in &all {
            let refl = fg.element_order(x) == 2;
            assert_eq!(sign.value(x), Some(if refl { -1 } else { 1 }));
        }
    }

    #[test]
    fn hom_classes() {
        let aut9 = generate_closure(&w9(), 100).unwrap();
        let aut10 = generate_closure(&w10(), 100).unwrap();
        assert_eq!(enumerate_homs_up_to_conjugacy(&builtin_group("Z2").unwrap(), &aut9).unwrap().len(), 2);
        assert_eq!(enumerate_homs_up_to_conjugacy(&builtin_group("Z4").unwrap(), &aut9).unwrap().len(), 2);
        let z3 = enumerate_homs_up_to_conjugacy(&builtin_group("Z3").unwrap(), &aut10).unwrap();
        assert_eq!(z3.len(), 2);
        assert!(z3[0].images[0].is_identity());
    }

    #[test]
    fn kernel_image() {
        let aut9 = generate_closure(&w9(), 100).unwrap();
        let p = builtin_group("Z4").unwrap();
        let phi = GroupHom::new(p.clone(), aut9.clone(), vec![w9()[1].clone()]).unwrap();
        let (ker, img, induced) = hom_kernel_image(&phi).unwrap();
        assert_eq!(ker.len(), 2);
        let c = p.group().generators()[0];
        assert!(ker.contains(&p.group().pow(c, 2)));
        assert_eq!(img.order(), 2);
        assert_eq!(induced.source.order, 2);
        let triv = GroupHom::new(p.clone(), aut9.clone(), vec![IntegerMatrix::identity(3)]).unwrap();
        let (ker, img, _) = hom_kernel_image(&triv).unwrap();
        assert_eq!(ker.len(), 4);
        assert_eq!(img.order(), 1);
    }

    #[test]
    fn subgroup_counts() {
        let d6 = builtin_group("D6").unwrap();
        assert_eq!(d6.group().subgroups_all(48).unwrap().len(), 6);
        let s4 = builtin_group("S4").unwrap();
        assert_eq!(s4.group().subgroups_all(48).unwrap().len(), 30);
        assert_eq!(s4.group().conjugacy_classes_of_subgroups(48).unwrap().len(), 11);
    }

    #[test]
    fn names_and_words() {
        let d6 = builtin_group("D6").unwrap();
        let g = d6.group();
        let names: Vec<String> = g.elements().map(|e| g.element_name(e)).collect();
        assert_eq!(names, vec!["1", "r", "s", "r^2", "rs", "sr"]);
        let r = g.generators()[0];
        assert_eq!(g.subgroup_name(&g.closure(&[r])), "<r>");
        assert_eq!(parse_word("g1^3g2", &["g1".into(), "g2".into()]).unwrap().len(), 4);
    }
}
