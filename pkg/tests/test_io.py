import struct

import numpy as np
import pytest

from octolat import io
from octolat.errors import FormatError
from octolat.lattice import GridFunction, GridSpec
from octolat.layer import LAYER_DIM
from octolat.oracle import random_boundary, random_grid
from octolat.spectral import fundsol_exact, fundsol_paper

T3 = GridSpec.torus(3, 0.5)


@pytest.fixture(scope="module")
def kernel():
    E, sing = fundsol_exact(T3, "-")
    return E, sing.nodes


def test_binary_roundtrip_bit_exact(tmp_path, kernel):
    E, nodes = kernel
    p = tmp_path / "k.bin"
    io.write_kernel_bin(p, E, "exact", "-", nodes)
    back, meta = io.read_kernel_bin(p)
    np.testing.assert_array_equal(back.values, E.values)
    assert back.spec.sizes == T3.sizes and back.spec.h == 0.5
    assert meta.variant == "exact" and meta.direction == "-"
    assert meta.singular_nodes == tuple(tuple(n) for n in nodes)


def test_binary_layout(kernel):
    E, nodes = kernel
    data = io.kernel_bytes(E, "exact", "-", nodes)
    assert data[:4] == b"OCT8"
    version, var, dirn = struct.unpack_from("<IBB", data, 4)
    assert (version, var, dirn) == (1, 1, 1)
    assert len(data) == io._HEADER.size + 32 * len(nodes) + T3.npoints * 8 * 16
    assert io.kernel_bytes(E, "exact", "-", nodes) == data


def test_binary_complex_values_kept(tmp_path):
    spec = GridSpec.torus(2)
    f = random_grid(0, spec, kind="complex")
    io.write_kernel_bin(tmp_path / "c.bin", f, "paper", "+")
    back, meta = io.read_kernel_bin(tmp_path / "c.bin")
    np.testing.assert_array_equal(back.values, f.values)
    assert meta.singular_nodes == ()


@pytest.mark.parametrize("mutate", [
    lambda b: b"XXXX" + b[4:],
    lambda b: b[:4] + struct.pack("<I", 9) + b[8:],
    lambda b: b[:8] + b"\x07" + b[9:],
    lambda b: b[:-8],
    lambda b: b[:10],
])
def test_binary_rejects_malformed(tmp_path, mutate):
    E = GridFunction.zeros(GridSpec.torus(2))
    p = tmp_path / "bad.bin"
    p.write_bytes(mutate(io.kernel_bytes(E, "exact", "+")))
    with pytest.raises(FormatError):
        io.read_kernel_bin(p)


def test_kernel_bytes_bad_names():
    with pytest.raises(ValueError):
        io.kernel_bytes(GridFunction.zeros(GridSpec.torus(2)), "fancy", "+")


def test_csv_roundtrip_bit_exact(tmp_path, kernel):
    E, nodes = kernel
    p = tmp_path / "k.csv"
    io.write_kernel_csv(p, E, "exact", "-", nodes)
    back, meta = io.read_kernel_csv(p)
    np.testing.assert_array_equal(back.values, E.values)
    assert meta.h == 0.5 and meta.singular_nodes == tuple(tuple(n) for n in nodes)
    header = p.read_text().splitlines()[0].split(",")
    assert len(header) == 24
    assert header[:2] == ["m0", "m1"] and header[8:10] == ["c0_re", "c0_im"]


def test_csv_of_printed_kernel(tmp_path):
    spec = GridSpec.torus(2)
    E = fundsol_paper(spec)
    io.write_kernel_csv(tmp_path / "p.csv", E, "paper", "+", [(0,) * 8])
    back, meta = io.read_kernel_csv(tmp_path / "p.csv")
    np.testing.assert_array_equal(back.values, E.values)
    assert meta.variant == "paper"


def test_csv_wrong_columns(tmp_path, kernel):
    E, nodes = kernel
    p = tmp_path / "k.csv"
    io.write_kernel_csv(p, E, "exact", "-", nodes)
    lines = p.read_text().splitlines()
    p.write_text("\n".join([lines[0]] + [ln.rsplit(",", 1)[0] for ln in lines[1:]]) + "\n")
    with pytest.raises(FormatError):
        io.read_kernel_csv(p)


# --- boundary CSV ----------------------------------------------------------------

def test_boundary_roundtrip(tmp_path):
    bd = random_boundary(2, (3, 2, 2, 3, 2, 2, 2), h=0.25, layer=-1)
    p = tmp_path / "b.csv"
    io.write_boundary_csv(p, bd)
    back = io.read_boundary_csv(p)
    np.testing.assert_array_equal(back.values, bd.values)
    assert (back.sizes, back.h, back.layer) == (bd.sizes, bd.h, bd.layer)
    assert io.read_boundary_csv(p, layer=1).layer == 1


def test_boundary_sparse_without_sizes(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("# layer: 0\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + "1,0,0,0,0,0,2," + ",".join(["1.5"] * 8) + "\n")
    bd = io.read_boundary_csv(p)
    assert bd.sizes == (2, 1, 1, 1, 1, 1, 3)
    assert bd.values[1, 0, 0, 0, 0, 0, 2, 3] == 1.5
    assert bd.values.sum() == 12.0


BAD_BOUNDARY = {
    "empty": "",
    "no-rows": "# layer: 1\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n",
    "header": "# layer: 1\nm0,m1\n0,0\n",
    "short-row": "# layer: 1\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n0,0,0\n",
    "text": "# layer: 1\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["0"] * 7 + ["x"] * 8) + "\n",
    "nan": "# layer: 1\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["0"] * 7 + ["nan"] * 8) + "\n",
    "negative": "# layer: 1\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["-1"] + ["0"] * 14) + "\n",
    "no-layer": ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["0"] * 15) + "\n",
    "bad-layer": "# layer: 5\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["0"] * 15) + "\n",
    "bad-sizes": "# layer: 0\n# sizes: 2,2\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["0"] * 15) + "\n",
    "outside": "# layer: 0\n# sizes: 2,2,2,2,2,2,2\n" + ",".join(io.BOUNDARY_COLUMNS) + "\n" + ",".join(["3"] + ["0"] * 14) + "\n",
}


@pytest.mark.parametrize("name", sorted(BAD_BOUNDARY))
def test_boundary_rejects_malformed(tmp_path, name):
    p = tmp_path / f"{name}.csv"
    p.write_text(BAD_BOUNDARY[name])
    with pytest.raises(FormatError):
        io.read_boundary_csv(p)


def test_boundary_missing_file(tmp_path):
    with pytest.raises(FormatError):
        io.read_boundary_csv(tmp_path / "nope.csv")


def test_boundary_writer_rejects_complex(tmp_path):
    bd = random_boundary(0, 2, layer=0)
    bd = bd.with_values(bd.values * 1j)
    with pytest.raises(ValueError):
        io.write_boundary_csv(tmp_path / "c.csv", bd)
    assert len(io.BOUNDARY_COLUMNS) == LAYER_DIM + 8
