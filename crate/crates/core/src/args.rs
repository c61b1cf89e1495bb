use crate::ddc::{parse_sign, parse_slot_ref, tokenize, SlotRef};
use crate::{Error, Result};

/// Positional words and `key=value` pairs of one script line.
pub(crate) struct Args {
    pub pos: Vec<String>,
    pub kv: Vec<(String, String)>,
}

pub(crate) fn syntax<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax(msg.into()))
}

impl Args {
    pub fn parse(text: &str) -> Args {
        Self::from_tokens(tokenize(text).into_iter().map(|(_, t)| t))
    }

    pub fn from_tokens(toks: impl IntoIterator<Item = String>) -> Args {
        let mut pos = Vec::new();
        let mut kv = Vec::new();
        for t in toks {
            match t.split_once('=') {
                Some((k, v)) if !k.contains('(') => kv.push((k.to_string(), v.to_string())),
                _ => pos.push(t),
            }
        }
        Args { pos, kv }
    }

    pub fn get(&self, k: &str) -> Option<&str> {
        self.kv.iter().find(|(a, _)| a == k).map(|(_, v)| v.as_str())
    }

    pub fn req(&self, k: &str) -> Result<&str> {
        match self.get(k) {
            Some(v) => Ok(v),
            None => syntax(format!("missing `{k}=`")),
        }
    }

    pub fn slot(&self, k: &str) -> Result<SlotRef> {
        let v = self.req(k)?;
        match parse_slot_ref(v) {
            Some(r) => Ok(r),
            None => syntax(format!("bad slot reference `{v}`")),
        }
    }

    pub fn sign(&self, k: &str) -> Result<i8> {
        let v = self.req(k)?;
        match parse_sign(v) {
            Some(s) => Ok(s),
            None => syntax(format!("bad sign `{v}`")),
        }
    }

    pub fn sign_or(&self, k: &str, default: i8) -> Result<i8> {
        if self.get(k).is_some() {
            self.sign(k)
        } else {
            Ok(default)
        }
    }

    pub fn int(&self, k: &str) -> Result<i64> {
        let v = self.req(k)?;
        match v.parse() {
            Ok(n) => Ok(n),
            Err(_) => syntax(format!("bad integer `{v}`")),
        }
    }

    pub fn int_or(&self, k: &str, default: i64) -> Result<i64> {
        if self.get(k).is_some() {
            self.int(k)
        } else {
            Ok(default)
        }
    }
}
