//! Saturation of the equational theory of labels over a finite universe of
//! label expressions, and brute-force lattice law checks.

use taint_hol::lattice::{Label, TaintLattice};

/// A join document's facts: label names, bottom, and `a ⊔ b ≡ c` axioms with
/// `*` expanded. Read directly from the text so the closure does not share
/// code with the loader.
pub struct Facts {
    pub labels: Vec<String>,
    pub bottom: String,
    pub joins: Vec<(usize, usize, usize)>,
}

pub fn read_facts(doc: &str) -> Facts {
    let mut labels = Vec::new();
    let mut bottom = String::new();
    let mut raw = Vec::new();
    for line in doc.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("labels:") {
            labels.extend(rest.split_whitespace().map(str::to_string));
        } else if let Some(rest) = line.strip_prefix("bottom:") {
            bottom = rest.trim().to_string();
        } else if let Some(rest) = line.strip_prefix("join:") {
            let w: Vec<&str> = rest.split_whitespace().collect();
            assert_eq!(w.len(), 4, "{line}");
            assert_eq!(w[2], "=");
            raw.push((w[0].to_string(), w[1].to_string(), w[3].to_string()));
        }
    }
    let idx = |s: &str| labels.iter().position(|l| l == s).unwrap_or_else(|| panic!("label {s}"));
    let all = |s: &str| -> Vec<usize> {
        if s == "*" {
            (0..labels.len()).collect()
        } else {
            vec![idx(s)]
        }
    };
    let mut joins = Vec::new();
    for (a, b, c) in &raw {
        for x in all(a) {
            for y in all(b) {
                joins.push((x, y, idx(c)));
            }
        }
    }
    Facts { labels, bottom, joins }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expr {
    Atom(usize),
    Join(usize, usize),
}

/// Label expressions up to nesting depth two, closed under subexpressions,
/// with a union-find over them.
pub struct Closure {
    n: usize,
    exprs: Vec<Expr>,
    parent: Vec<usize>,
}

impl Closure {
    fn atom(&self, a: usize) -> usize {
        a
    }

    fn pair(&self, a: usize, b: usize) -> usize {
        self.n + a * self.n + b
    }

    fn node(&self, e: Expr) -> usize {
        self.exprs.iter().position(|x| *x == e).expect("expression in universe")
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub fn equiv(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// `a ≤ b` iff `a ⊔ b ≡ b`.
    pub fn leq(&mut self, a: usize, b: usize) -> bool {
        let p = self.pair(a, b);
        let b = self.atom(b);
        self.equiv(p, b)
    }

    pub fn join_is(&mut self, a: usize, b: usize, c: usize) -> bool {
        let p = self.pair(a, b);
        let c = self.atom(c);
        self.equiv(p, c)
    }

    /// Applies the rules (reflexivity, symmetry and transitivity through
    /// union-find; idempotence, commutativity, associativity, the bottom
    /// rule, the configured joins, and congruence) until nothing changes.
    pub fn saturate(f: &Facts) -> Closure {
        let n = f.labels.len();
        let mut exprs: Vec<Expr> = (0..n).map(Expr::Atom).collect();
        for a in 0..n {
            for b in 0..n {
                exprs.push(Expr::Join(a, b));
            }
        }
        // (a ⊔ b) ⊔ c and a ⊔ (b ⊔ c)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    exprs.push(Expr::Join(n + a * n + b, c));
                    exprs.push(Expr::Join(a, n + b * n + c));
                }
            }
        }
        let len = exprs.len();
        let mut cl = Closure {
            n,
            exprs,
            parent: (0..len).collect(),
        };
        let bottom = f.labels.iter().position(|l| *l == f.bottom).expect("bottom");
        loop {
            let mut changed = false;
            for a in 0..n {
                changed |= cl.union(cl.pair(a, a), a);
                changed |= cl.union(cl.pair(bottom, a), a);
                for b in 0..n {
                    changed |= cl.union(cl.pair(a, b), cl.pair(b, a));
                    for c in 0..n {
                        let l = cl.node(Expr::Join(a, cl.pair(b, c)));
                        let r = cl.node(Expr::Join(cl.pair(a, b), c));
                        changed |= cl.union(l, r);
                    }
                }
            }
            for &(a, b, c) in &f.joins {
                changed |= cl.union(cl.pair(a, b), c);
            }
            for i in n..len {
                for j in (i + 1)..len {
                    let (Expr::Join(a, b), Expr::Join(c, d)) = (cl.exprs[i], cl.exprs[j]) else {
                        continue;
                    };
                    if cl.equiv(a, c) && cl.equiv(b, d) {
                        changed |= cl.union(i, j);
                    }
                }
            }
            if !changed {
                return cl;
            }
        }
    }
}

/// Every lattice law over all pairs and triples of members. Returns the
/// number of triples checked.
pub fn check_laws(lat: &TaintLattice) -> Result<usize, String> {
    let m: Vec<Label> = lat.members().to_vec();
    let j = |a: &Label, b: &Label| lat.join(a, b).map_err(|e| e.to_string());
    let leq = |a: &Label, b: &Label| lat.leq(a, b).map_err(|e| e.to_string());
    let bot = lat.bottom();
    let mut triples = 0;
    for a in &m {
        if j(a, a)? != *a {
            return Err(format!("idempotence fails at {a}"));
        }
        if j(&bot, a)? != *a {
            return Err(format!("bottom is not neutral for {a}"));
        }
        for b in &m {
            let ab = j(a, b)?;
            if !m.contains(&ab) {
                return Err(format!("{a} join {b} = {ab} is not a member"));
            }
            if ab != j(b, a)? {
                return Err(format!("commutativity fails at {a}, {b}"));
            }
            if leq(a, b)? != (ab == *b) {
                return Err(format!("leq disagrees with join at {a}, {b}"));
            }
            if a != b && leq(a, b)? && leq(b, a)? {
                return Err(format!("antisymmetry fails at {a}, {b}"));
            }
            for c in &m {
                triples += 1;
                if j(a, &j(b, c)?)? != j(&ab, c)? {
                    return Err(format!("associativity fails at {a}, {b}, {c}"));
                }
                if leq(a, b)? && leq(b, c)? && !leq(a, c)? {
                    return Err(format!("transitivity fails at {a}, {b}, {c}"));
                }
                // least upper bound
                if leq(a, c)? && leq(b, c)? && !leq(&ab, c)? {
                    return Err(format!("{a} join {b} is not least below {c}"));
                }
            }
        }
    }
    Ok(triples)
}

/// Compares `leq` and `join` against the saturated theory on every pair.
/// Returns the number of pairs checked.
pub fn check_against_closure(lat: &TaintLattice, doc: &str) -> Result<usize, String> {
    let facts = read_facts(doc);
    let mut cl = Closure::saturate(&facts);
    let n = facts.labels.len();
    for a in 0..n {
        for b in 0..n {
            if a != b && cl.equiv(a, b) {
                return Err(format!("theory identifies {} and {}", facts.labels[a], facts.labels[b]));
            }
        }
    }
    let mut pairs = 0;
    for a in 0..n {
        for b in 0..n {
            let (la, lb) = (Label::new(&facts.labels[a]), Label::new(&facts.labels[b]));
            let got = lat.leq(&la, &lb).map_err(|e| e.to_string())?;
            if got != cl.leq(a, b) {
                return Err(format!("leq({la}, {lb}) = {got} disagrees with the closure"));
            }
            let jn = lat.join(&la, &lb).map_err(|e| e.to_string())?;
            let c = facts.labels.iter().position(|l| *l == jn.as_str()).expect("member");
            if !cl.join_is(a, b, c) {
                return Err(format!("{la} join {lb} = {jn} is not derivable"));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}
