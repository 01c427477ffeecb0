use racg_core::graph::PresentationGraph;
use racg_core::separators::*;

fn main() {
    // search for: PS-free, join-irreducible, one-ended, WITH a VFS
    for n in 5..=8usize {
        let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let pairs: Vec<(u8, u8)> = (0..n as u8)
            .flat_map(|u| (u + 1..n as u8).map(move |v| (u, v)))
            .collect();
        let mut found = 0;
        for mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(u8, u8)> = pairs.iter().enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if edges.len() < n { continue; }
            let g = PresentationGraph::new(names.clone(), &edges).unwrap();
            if !g.is_join_irreducible() { continue; }
            if ends(&g).unwrap() != EndsClass::One { continue; }
            if find_product_separator(&g).unwrap().is_some() { continue; }
            if find_vfs(&g).unwrap().is_some() {
                found += 1;
                if found <= 2 {
                    println!("n={n} mask={mask:#x} edges={:?} vfs={:?}", edges, find_vfs(&g).unwrap().unwrap());
                }
            }
            if found > 0 && mask > 2_000_000 { break; }
        }
        println!("n={n}: found {found} eligible VFS-positive graphs (search may be partial for n=8)");
        if n == 7 && found > 0 { break; }
    }
}
