use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Recorded in output metadata so runs can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str =
    "chacha8/rand_chacha-0.9; key=master_seed u64 LE zero-padded to 32 bytes; stream=(tag<<32)|index";

/// Independent ChaCha8 stream for replication `index` of experiment `tag`
/// (the sample size, for replication sweeps).
pub fn stream_rng(master_seed: u64, tag: u64, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream((tag << 32) | (index & 0xffff_ffff));
    rng
}
