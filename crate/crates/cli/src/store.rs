//! Cell computations routed through the persistent cache.

use knotcalc_core::{Engine, Parity, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, Key, Kind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisPayload {
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct D1Payload {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, "num/den")` for every nonzero entry.
    pub entries: Vec<(usize, usize, String)>,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Payload {
    pub dim: usize,
    pub kernel_dim: usize,
    pub incoming_rank: usize,
}

/// Always `"num/den"`, including integers.
pub fn ratio_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub struct Store {
    engine: Engine,
    cache: Cache,
}

impl Store {
    pub fn new(parity: Parity, cache: Cache) -> Store {
        Store { engine: Engine::new(parity), cache }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn key(&self, kind: Kind, p: u32, k: usize) -> Key {
        Key { kind, parity: self.engine.parity(), p, k }
    }

    fn lookup<P: DeserializeOwned>(&self, key: &Key) -> Option<P> {
        serde_json::from_value(self.cache.get(key)?).ok()
    }

    fn store<P: Serialize>(&self, key: Key, payload: &P) {
        let value = serde_json::to_value(payload).expect("payloads serialize");
        if let Err(err) = self.cache.put(key, value) {
            eprintln!("warning: could not write cache entry: {err}");
        }
    }

    pub fn cohomology(&self, p: u32, k: usize) -> BasisPayload {
        let key = self.key(Kind::Cohomology, p, k);
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let space = self.engine.cohomology(p, k);
        let payload =
            BasisPayload { dim: space.dim(), basis: space.basis_monomials().map(ToString::to_string).collect() };
        self.store(key, &payload);
        payload
    }

    fn e1_payload(&self, p: u32, k: usize) -> BasisPayload {
        let cell = self.engine.e1(p, k);
        BasisPayload { dim: cell.dim(), basis: cell.basis_monomials().map(ToString::to_string).collect() }
    }

    pub fn e1(&self, p: u32, k: usize) -> BasisPayload {
        let key = self.key(Kind::E1, p, k);
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let payload = self.e1_payload(p, k);
        self.store(key, &payload);
        payload
    }

    fn d1_payload(&self, p: u32, k: usize) -> D1Payload {
        let d1 = self.engine.d1(p, k);
        let m = d1.matrix();
        D1Payload {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().map(|(r, c, q)| (r, c, ratio_string(q))).collect(),
            rank: d1.rank(),
        }
    }

    /// E2 cell dimensions. A miss also records the E1 basis and the
    /// outgoing `d1` of the cell.
    pub fn e2(&self, p: u32, k: usize) -> E2Payload {
        let key = self.key(Kind::E2, p, k);
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let cell = self.engine.e2(p, k);
        let payload = E2Payload { dim: cell.dim, kernel_dim: cell.kernel_dim, incoming_rank: cell.incoming_rank };
        if self.cache.is_enabled() {
            self.store(self.key(Kind::E1, p, k), &self.e1_payload(p, k));
            if p >= 1 {
                self.store(self.key(Kind::D1, p, k), &self.d1_payload(p, k));
            }
        }
        self.store(key, &payload);
        payload
    }
}
