//! Read and write the Triangle `.node/.ele` format, including 1-based files,
//! and show how parse errors carry line numbers.

use smartlap::prelude::*;

const NODE: &str = "\
# a unit square, 1-based as Triangle writes by default
4 2 0 1
1 0.0 0.0 1
2 1.0 0.0 1
3 1.0 1.0 1
4 0.0 1.0 1
";

const ELE: &str = "\
2 3 0
1 1 2 3
2 1 3 4
";

fn main() -> smartlap::Result<()> {
    let mesh = read_triangle_format(NODE, ELE, LayoutKind::Aos)?;
    println!("read {} vertices, {} triangles", mesh.n_vert(), mesh.n_trgl());
    println!("triangles (0-based): {:?}", mesh.triangles());

    let (node, ele) = write_triangle_format(&mesh);
    println!("--- written .node ---\n{node}--- written .ele ---\n{ele}");

    let again = read_triangle_format(&node, &ele, LayoutKind::Soa)?;
    println!("round trip preserves the mesh: {}", again == mesh);

    let broken = NODE.replace("3 1.0 1.0 1", "3 1.0 oops 1");
    match read_triangle_format(&broken, ELE, LayoutKind::Soa) {
        Err(e) => println!("malformed input rejected: {e}"),
        Ok(_) => unreachable!("bad coordinate accepted"),
    }
    Ok(())
}
