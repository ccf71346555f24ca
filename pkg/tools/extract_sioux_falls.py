"""Write SiouxFalls TNTP files from the reference project bundled with aequilibrae.

The aequilibrae wheel ships ``reference_files/sioux_falls.zip`` holding a
spatialite project (links with capacity, free-flow time and BPR
parameters) and an OMX demand matrix.  Neither GitHub nor the TNTP
repository is reachable from the build sandbox, so the standard files are
regenerated from that copy.

    pip download --no-deps aequilibrae -d /tmp/ae
    python tools/extract_sioux_falls.py /tmp/ae/aequilibrae-*.whl tests/data

Needs ``h5py`` for the OMX matrix.
"""
import argparse
import io
import sqlite3
import tempfile
import zipfile
from pathlib import Path

import h5py


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wheel")
    ap.add_argument("outdir")
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    inner = zipfile.ZipFile(args.wheel).read("aequilibrae/reference_files/sioux_falls.zip")
    with tempfile.TemporaryDirectory() as tmp:
        zipfile.ZipFile(io.BytesIO(inner)).extractall(tmp)
        con = sqlite3.connect(Path(tmp) / "project_database.sqlite")
        rows = con.execute(
            "select a_node, b_node, capacity_ab, free_flow_time, b, power from links order by link_id"
        ).fetchall()
        n_nodes = con.execute("select count(*) from nodes").fetchone()[0]
        con.close()
        with h5py.File(Path(tmp) / "matrices" / "demand.omx", "r") as fh:
            mat = fh["data/matrix"][:]
            zones = [int(z) for z in fh["lookup/taz"][:]]

    lines = [
        f"<NUMBER OF ZONES> {len(zones)}",
        f"<NUMBER OF NODES> {n_nodes}",
        "<FIRST THRU NODE> 1",
        f"<NUMBER OF LINKS> {len(rows)}",
        "<END OF METADATA>",
        "",
        "",
        "~\tinit_node\tterm_node\tcapacity\tlength\tfree_flow_time\tb\tpower\tspeed\ttoll\tlink_type\t;",
    ]
    for a, b, cap, fft, bb, power in rows:
        # the standard file lists length equal to the free-flow time
        lines.append(f"\t{a}\t{b}\t{cap!r}\t{fft:g}\t{fft:g}\t{bb!r}\t{power:g}\t0\t0\t1\t;")
    (out / "SiouxFalls_net.tntp").write_text("\n".join(lines) + "\n")

    trips = [
        f"<NUMBER OF ZONES> {len(zones)}",
        f"<TOTAL OD FLOW> {float(mat.sum())!r}",
        "<END OF METADATA>",
        "",
        "",
    ]
    for i, o in enumerate(zones):
        trips.append(f"Origin \t{o} ")
        entries = [f"{d:>5} :{float(mat[i, j]):>9.1f};" for j, d in enumerate(zones)]
        for s in range(0, len(entries), 5):
            trips.append("  ".join(entries[s:s + 5]))
        trips.append("")
    (out / "SiouxFalls_trips.tntp").write_text("\n".join(trips) + "\n")


if __name__ == "__main__":
    main()
