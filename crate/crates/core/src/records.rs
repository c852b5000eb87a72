//! Line format for persisted memo entries:
//! `<prefix>:<canonical key text>\t<decimal integer>`, with prefix `gw` for
//! blowup invariants and `hat` for ordered tangency invariants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::engine::{Engine, InvariantKey};
use crate::error::{Error, Result};
use crate::gw::GwKey;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CacheRecord {
    Blowup(GwKey, BigInt),
    Tangency(InvariantKey, BigInt),
}

impl fmt::Display for CacheRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheRecord::Blowup(key, v) => write!(f, "gw:{}\t{v}", key.key_text()),
            CacheRecord::Tangency(key, v) => write!(f, "hat:{}\t{v}", key.key_text()),
        }
    }
}

impl FromStr for CacheRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad cache line {line:?}"));
        let (key, value) = line.trim_end_matches(['\r', '\n']).split_once('\t').ok_or_else(bad)?;
        let value: BigInt = value.parse().map_err(|_| bad())?;
        let (prefix, key) = key.split_once(':').ok_or_else(bad)?;
        match prefix {
            "gw" => Ok(CacheRecord::Blowup(GwKey::parse_key_text(key)?, value)),
            "hat" => Ok(CacheRecord::Tangency(key.parse()?, value)),
            _ => Err(bad()),
        }
    }
}

/// All memoized values of `engine` and its blowup backend, blowup entries first.
pub fn export(engine: &Engine) -> Vec<CacheRecord> {
    let mut out: Vec<CacheRecord> = engine.gw().entries().into_iter().map(|(k, v)| CacheRecord::Blowup(k, v)).collect();
    out.extend(engine.entries().into_iter().map(|(k, v)| CacheRecord::Tangency(k, v)));
    out
}

pub fn import(engine: &Engine, records: impl IntoIterator<Item = CacheRecord>) {
    for record in records {
        match record {
            CacheRecord::Blowup(k, v) => engine.gw().insert(k, v),
            CacheRecord::Tangency(k, v) => engine.insert(k, v),
        }
    }
}
