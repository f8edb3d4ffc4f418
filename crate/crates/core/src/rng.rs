//! Seeded random streams.
//!
//! Every random quantity in a replication comes from a dedicated ChaCha8
//! stream addressed by `(master_seed, replication, role, entity)`. The key is
//! built from the seed and the replication index, and the 64-bit ChaCha stream
//! id carries the role tag in its top byte and the entity id below it. Two
//! different addresses therefore never share keystream, and changing how many
//! draws one entity consumes never shifts another entity's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// What a stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Reward draws of one agent.
    Reward,
    /// Tie-breaking draws of one agent.
    Decision,
    /// Link failures of one undirected edge or one ordered pair.
    Edge,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Reward => 1,
            Role::Decision => 2,
            Role::Edge => 3,
        }
    }
}

const ENTITY_BITS: u32 = 56;

/// Opens the stream for `(master_seed, replication, role, entity)`.
///
/// Panics if `entity` does not fit in 56 bits.
pub fn stream(master_seed: u64, replication: u64, role: Role, entity: u64) -> Stream {
    assert!(entity < (1 << ENTITY_BITS), "entity id {entity} too large");
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&replication.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream((role.tag() << ENTITY_BITS) | entity);
    rng
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
