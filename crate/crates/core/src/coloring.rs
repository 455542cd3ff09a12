//! Colorings: builtin families, explicit tables, external oracle processes and closures.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fin::{BlockSequence, FinElement};
use crate::types::{type_of, type_of_tuple};

/// Anything a coloring can be asked about. Builtin families read the
/// optional features; tables and oracles use only the canonical string.
pub trait Colorable {
    fn canonical(&self) -> String;

    fn support_size(&self) -> Option<usize> {
        None
    }

    /// Largest support position, 1-based.
    fn max_position(&self) -> Option<usize> {
        None
    }

    fn type_key(&self) -> Option<String> {
        None
    }

    fn cardinality(&self) -> Option<usize> {
        None
    }
}

impl Colorable for FinElement {
    fn canonical(&self) -> String {
        FinElement::canonical(self)
    }

    fn support_size(&self) -> Option<usize> {
        Some(FinElement::support_size(self))
    }

    fn max_position(&self) -> Option<usize> {
        self.max_support().map(|x| x + 1)
    }

    fn type_key(&self) -> Option<String> {
        type_of(self).ok().map(|(t, _)| t.canonical())
    }
}

impl Colorable for BlockSequence {
    fn canonical(&self) -> String {
        BlockSequence::canonical(self)
    }

    fn support_size(&self) -> Option<usize> {
        Some(self.entries().iter().map(FinElement::support_size).sum())
    }

    fn max_position(&self) -> Option<usize> {
        self.entries().last().and_then(|e| e.max_support()).map(|x| x + 1)
    }

    fn type_key(&self) -> Option<String> {
        type_of_tuple(self).ok().map(|(t, _)| t.canonical())
    }
}

/// A k-subset of {1..N}, positions stored 1-based and increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KSet(pub Vec<usize>);

impl Colorable for KSet {
    fn canonical(&self) -> String {
        let items: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }

    fn max_position(&self) -> Option<usize> {
        self.0.last().copied()
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.0.len())
    }

    fn support_size(&self) -> Option<usize> {
        Some(self.0.len())
    }
}

/// The builtin coloring families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    Const(u8),
    SuppParity,
    MaxPosMod(u8),
    TypeHash(u8),
    CardParity,
}

impl Builtin {
    pub fn parse(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let num = |a: Option<&str>| -> Result<u8> {
            let v: u8 = a
                .ok_or_else(|| Error::Parse(format!("builtin {name} needs a numeric argument")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad argument in builtin {text:?}")))?;
            if v == 0 {
                return Err(Error::InvalidParameter(format!("argument of {name} must be positive")));
            }
            Ok(v)
        };
        match name {
            "const" => Ok(Builtin::Const(num(arg)?)),
            "supp-parity" => Ok(Builtin::SuppParity),
            "max-pos-mod" => Ok(Builtin::MaxPosMod(num(arg)?)),
            "type-hash" => Ok(Builtin::TypeHash(num(arg)?)),
            "card-parity" => Ok(Builtin::CardParity),
            _ => Err(Error::Parse(format!("unknown builtin coloring {text:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Const(c) => format!("const:{c}"),
            Builtin::SuppParity => "supp-parity".into(),
            Builtin::MaxPosMod(r) => format!("max-pos-mod:{r}"),
            Builtin::TypeHash(r) => format!("type-hash:{r}"),
            Builtin::CardParity => "card-parity".into(),
        }
    }

    /// Colors this family can produce.
    pub fn colors(&self) -> u8 {
        match self {
            Builtin::Const(c) => *c,
            Builtin::SuppParity | Builtin::CardParity => 2,
            Builtin::MaxPosMod(r) | Builtin::TypeHash(r) => *r,
        }
    }

    fn color<T: Colorable + ?Sized>(&self, obj: &T) -> Result<u8> {
        let missing = |what: &str| Error::Oracle {
            object: obj.canonical(),
            reason: format!("{} is not defined on this object ({what})", self.name()),
        };
        match self {
            Builtin::Const(c) => Ok(*c),
            Builtin::SuppParity => Ok(1 + (obj.support_size().ok_or_else(|| missing("support"))? % 2) as u8),
            Builtin::MaxPosMod(r) => {
                Ok(1 + (obj.max_position().ok_or_else(|| missing("empty support"))? % *r as usize) as u8)
            }
            Builtin::TypeHash(r) => {
                let key = obj.type_key().ok_or_else(|| missing("no type"))?;
                Ok(1 + (hash64(0, &key) % *r as u64) as u8)
            }
            Builtin::CardParity => Ok(1 + (obj.cardinality().ok_or_else(|| missing("cardinality"))? % 2) as u8),
        }
    }
}

/// Deterministic 64-bit hash of a string under a seed.
pub fn hash64(seed: u64, text: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(text.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// JSON table coloring. Objects missing from `entries` are colored by a
/// seeded hash when `fallback_seed` is present, and are an error otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorTable {
    pub colors: u8,
    #[serde(default)]
    pub entries: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_seed: Option<u64>,
}

impl ColorTable {
    pub fn seeded(colors: u8, seed: u64) -> Self {
        ColorTable { colors, entries: BTreeMap::new(), fallback_seed: Some(seed) }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MissingColoring(format!("{}: {e}", path.display())))?;
        let table: ColorTable = serde_json::from_str(&text)?;
        if let Some((k, v)) = table.entries.iter().find(|(_, &v)| v == 0 || v > table.colors) {
            return Err(Error::Parse(format!("table color {v} for {k} outside 1..={}", table.colors)));
        }
        Ok(table)
    }

    fn color(&self, key: &str) -> Result<u8> {
        if let Some(&c) = self.entries.get(key) {
            return Ok(c);
        }
        match self.fallback_seed {
            Some(seed) => Ok(1 + (hash64(seed, key) % self.colors as u64) as u8),
            None => Err(Error::Oracle { object: key.into(), reason: "no table entry".into() }),
        }
    }
}

struct ExecProcess {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl Drop for ExecProcess {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// External oracle speaking the line protocol: one canonical object per
/// request line, one decimal color per response line.
pub struct ExecOracle {
    command: String,
    process: Mutex<Option<ExecProcess>>,
}

impl ExecOracle {
    pub fn new(command: &str) -> Result<Self> {
        let program = command
            .split_whitespace()
            .next()
            .ok_or_else(|| Error::MissingColoring("empty oracle command".into()))?;
        if !program_exists(program) {
            return Err(Error::MissingColoring(format!("oracle executable {program:?} not found")));
        }
        Ok(ExecOracle { command: command.to_string(), process: Mutex::new(None) })
    }

    fn spawn(&self) -> Result<ExecProcess> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::MissingColoring(format!("{}: {e}", self.command)))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(ExecProcess { child, stdin, stdout })
    }

    fn query(&self, key: &str) -> Result<String> {
        let mut guard = self.process.lock().expect("oracle lock poisoned");
        if guard.is_none() {
            *guard = Some(self.spawn()?);
        }
        let proc = guard.as_mut().expect("spawned above");
        let protocol = |reason: String| Error::Oracle { object: key.into(), reason };
        writeln!(proc.stdin, "{key}").and_then(|_| proc.stdin.flush()).map_err(|e| protocol(e.to_string()))?;
        let mut line = String::new();
        let read = proc.stdout.read_line(&mut line).map_err(|e| protocol(e.to_string()))?;
        if read == 0 {
            *guard = None;
            return Err(protocol("oracle closed its output".into()));
        }
        Ok(line.trim().to_string())
    }
}

fn program_exists(program: &str) -> bool {
    if program.contains('/') {
        return Path::new(program).exists();
    }
    std::env::var_os("PATH")
        .map(|paths| std::env::split_paths(&paths).any(|dir| dir.join(program).is_file()))
        .unwrap_or(false)
}

type ColorFn = dyn Fn(&str) -> Result<u8> + Send + Sync;

enum Source {
    Builtin(Builtin),
    Table(ColorTable),
    Exec(ExecOracle),
    Function(Arc<ColorFn>),
}

/// A coloring with `colors` colors. Answers are memoized per canonical
/// string; a repeated query that disagrees with the memo is an error.
pub struct Oracle {
    colors: u8,
    spec: String,
    source: Source,
    memo: Mutex<HashMap<String, u8>>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle").field("colors", &self.colors).field("spec", &self.spec).finish()
    }
}

impl Oracle {
    /// Parses `builtin:<name>`, `table:<file>` or `exec:<cmd>`. `colors`
    /// overrides the family's own color count when given.
    pub fn from_spec(spec: &str, colors: Option<u8>) -> Result<Self> {
        let (kind, rest) =
            spec.split_once(':').ok_or_else(|| Error::Parse(format!("coloring spec {spec:?} lacks a kind")))?;
        let source = match kind {
            "builtin" => Source::Builtin(Builtin::parse(rest)?),
            "table" => Source::Table(ColorTable::load(Path::new(rest))?),
            "exec" => Source::Exec(ExecOracle::new(rest)?),
            _ => return Err(Error::Parse(format!("unknown coloring kind {kind:?}"))),
        };
        let own = match &source {
            Source::Builtin(b) => Some(b.colors()),
            Source::Table(t) => Some(t.colors),
            _ => None,
        };
        let colors = match (colors, own) {
            (Some(c), Some(o)) => c.max(o),
            (Some(c), None) => c,
            (None, Some(o)) => o,
            (None, None) => return Err(Error::InvalidParameter("exec colorings need an explicit color count".into())),
        };
        Ok(Oracle { colors, spec: spec.to_string(), source, memo: Mutex::new(HashMap::new()) })
    }

    pub fn builtin(b: Builtin) -> Self {
        let colors = b.colors();
        Oracle { colors, spec: format!("builtin:{}", b.name()), source: Source::Builtin(b), memo: Default::default() }
    }

    pub fn table(table: ColorTable, label: &str) -> Self {
        Oracle { colors: table.colors, spec: format!("table:{label}"), source: Source::Table(table), memo: Default::default() }
    }

    /// Closure over canonical strings.
    pub fn function(colors: u8, label: &str, f: impl Fn(&str) -> Result<u8> + Send + Sync + 'static) -> Self {
        Oracle {
            colors,
            spec: format!("function:{label}"),
            source: Source::Function(Arc::new(f)),
            memo: Default::default(),
        }
    }

    pub fn colors(&self) -> u8 {
        self.colors
    }

    /// The source description recorded in certificates.
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn color<T: Colorable + ?Sized>(&self, obj: &T) -> Result<u8> {
        let c = match &self.source {
            Source::Builtin(b) => b.color(obj)?,
            Source::Table(t) => t.color(&obj.canonical())?,
            Source::Function(f) => f(&obj.canonical())?,
            Source::Exec(e) => {
                let key = obj.canonical();
                if let Some(&c) = self.memo.lock().expect("memo lock").get(&key) {
                    return Ok(c);
                }
                let reply = e.query(&key)?;
                let c: u8 = reply
                    .parse()
                    .map_err(|_| Error::Oracle { object: key.clone(), reason: format!("malformed reply {reply:?}") })?;
                self.check_range(&key, c)?;
                return self.remember(key, c);
            }
        };
        self.check_range(&obj.canonical(), c)?;
        Ok(c)
    }

    fn check_range(&self, key: &str, c: u8) -> Result<()> {
        if c == 0 || c > self.colors {
            return Err(Error::Oracle { object: key.into(), reason: format!("color {c} outside 1..={}", self.colors) });
        }
        Ok(())
    }

    fn remember(&self, key: String, c: u8) -> Result<u8> {
        let mut memo = self.memo.lock().expect("memo lock");
        match memo.get(&key) {
            Some(&prev) if prev != c => {
                Err(Error::Oracle { object: key, reason: format!("inconsistent answers {prev} and {c}") })
            }
            _ => {
                memo.insert(key, c);
                Ok(c)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn builtin_families() {
        let p = el(2, &[0, 2, 1]);
        assert_eq!(Oracle::builtin(Builtin::Const(3)).color(&p).unwrap(), 3);
        assert_eq!(Oracle::builtin(Builtin::SuppParity).color(&p).unwrap(), 1);
        assert_eq!(Oracle::builtin(Builtin::MaxPosMod(2)).color(&p).unwrap(), 2);
        let t = Oracle::builtin(Builtin::TypeHash(5));
        assert_eq!(t.color(&p).unwrap(), t.color(&el(2, &[2, 2, 1])).unwrap());
        assert_eq!(Oracle::builtin(Builtin::CardParity).color(&KSet(vec![1, 4, 5])).unwrap(), 2);
        assert!(Oracle::builtin(Builtin::CardParity).color(&p).is_err());
        assert!(Builtin::parse("nope").is_err());
        assert_eq!(Builtin::parse("max-pos-mod:3").unwrap(), Builtin::MaxPosMod(3));
    }

    #[test]
    fn seeded_table_is_deterministic() {
        let a = Oracle::table(ColorTable::seeded(3, 7), "a");
        let b = Oracle::table(ColorTable::seeded(3, 7), "b");
        for p in crate::fin::enumerate_elements(2, 3, true).unwrap() {
            let c = a.color(&p).unwrap();
            assert!((1..=3).contains(&c));
            assert_eq!(c, b.color(&p).unwrap());
        }
    }

    #[test]
    fn exec_oracle_round_trip() {
        let o = Oracle::from_spec("exec:sh -c 'while read -r l; do echo $(( ${#l} % 2 + 1 )); done'", Some(2)).unwrap();
        let p = el(1, &[1]);
        let first = o.color(&p).unwrap();
        assert_eq!(first, o.color(&p).unwrap());
        assert_eq!(first, 1 + ("1:1:[1]".len() % 2) as u8);
        assert!(matches!(Oracle::from_spec("exec:/definitely/not/here", Some(2)), Err(Error::MissingColoring(_))));
    }

    #[test]
    fn out_of_range_answers_are_rejected() {
        let o = Oracle::function(2, "bad", |_| Ok(3));
        assert!(o.color(&el(1, &[1])).is_err());
    }
}
