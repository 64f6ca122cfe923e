//! Caching halting enumerations on disk and answering queries from them.

use ait::bitcore::bits;
use ait::cache::{estimate_from_entries, CacheKey, EnumCache};
use ait::complexity::Budgets;
use ait::toyvm::MachineMode;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("ait-example-cache");
    let cache = EnumCache::new(&dir)?;
    let b = Budgets::new(14, 64);
    let key = CacheKey::new(MachineMode::Plain, &bits(""), b);
    let (entries, status) = cache.get_or_compute(&key);
    println!("{status:?}: {} halting descriptions in {}", entries.len(), cache.path(&key).display());
    let (_, status) = cache.get_or_compute(&key);
    println!("second lookup: {status:?}");
    for x in ["0", "11", "000"] {
        println!("C({x}) = {:?}", estimate_from_entries(&bits(x), &entries, b).value);
    }
    Ok(())
}
