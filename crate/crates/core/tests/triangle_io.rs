use proptest::prelude::*;
use smartlap::prelude::{
    read_triangle_files, read_triangle_format, write_triangle_files, write_triangle_format, Error, GenSpec,
    LayoutKind, MeshStorage, Point,
};

#[test]
fn ten_thousand_vertex_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = GenSpec::delaunay(10_000, 42).build(LayoutKind::Soa).unwrap();
    let (node, ele) = write_triangle_files(&mesh, dir.path().join("m")).unwrap();
    assert!(node.ends_with("m.node") && ele.ends_with("m.ele"));
    for layout in LayoutKind::ALL {
        let back = read_triangle_files(dir.path().join("m"), layout).unwrap();
        assert!(back.coords_bit_eq(&mesh));
        assert_eq!(back.triangles(), mesh.triangles());
    }
}

#[test]
fn one_based_with_markers_and_attributes() {
    let node = "4 2 1 1\n1 0 0 7.5 1\n2 1 0 7.5 1\n3 1 1 7.5 1\n4 0 1 7.5 0 # comment\n";
    let ele = "2 3 1\n1 1 2 3 9\n2 1 3 4 9\n";
    let m = read_triangle_format(node, ele, LayoutKind::Aos).unwrap();
    assert_eq!(m.triangles(), vec![[0, 1, 2], [0, 2, 3]]);
    assert_eq!(m.point(2), Point::new(1.0, 1.0));
}

#[test]
fn errors_name_file_and_line() {
    let node = "3 2 0 0\n0 0 0\n1 1 0\n2 0 1\n";
    let bad_ele = "1 3 0\n0 0 1 5\n";
    match read_triangle_format(node, bad_ele, LayoutKind::Soa) {
        Err(Error::IndexOutOfRange { triangle: 0, vertex: 5, .. }) => {}
        other => panic!("{other:?}"),
    }
    let short = "3 2 0 0\n0 0 0\n1 1 0\n";
    match read_triangle_format(short, "1 3 0\n0 0 1 2\n", LayoutKind::Soa) {
        Err(Error::Parse { file, line, .. }) => assert_eq!((file, line), (".node", 4)),
        other => panic!("{other:?}"),
    }
    match read_triangle_format(node, "1 3 0\n0 0 1 1\n", LayoutKind::Soa) {
        Err(Error::DuplicateVertex { triangle: 0, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(read_triangle_format(node, "0 3 0\n", LayoutKind::Soa), Err(Error::NoTriangles)));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(read_triangle_files(dir.path().join("nope"), LayoutKind::Aos), Err(Error::Io { .. })));
}

proptest! {
    #[test]
    fn arbitrary_coordinates_round_trip(coords in prop::collection::vec((any::<f64>(), any::<f64>()), 3..40)) {
        let pts: Vec<Point> = coords
            .into_iter()
            .map(|(x, y)| Point::new(if x.is_finite() { x } else { 0.0 }, if y.is_finite() { y } else { 0.0 }))
            .collect();
        let tris: Vec<[u32; 3]> = (0..pts.len() as u32 - 2).map(|i| [i, i + 1, i + 2]).collect();
        let mesh = MeshStorage::build(&pts, &tris, LayoutKind::Soa).unwrap();
        let (node, ele) = write_triangle_format(&mesh);
        let back = read_triangle_format(&node, &ele, LayoutKind::Aos).unwrap();
        prop_assert!(back.coords_bit_eq(&mesh));
        prop_assert_eq!(back.triangles(), tris);
    }
}
