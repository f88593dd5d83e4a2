//! Seeded random streams. One run seed fans out into independent
//! ChaCha streams keyed by a task index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}
