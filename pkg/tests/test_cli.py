import io
import json

from bwgraphs.cli import main, parse_type_spec
from bwgraphs.metric import MetricAdmissibleGraph
from conftest import annulus_generator, minimal_annulus_oc


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTypeSpec:
    def test_annulus_spec(self):
        t = parse_type_spec("g=0,in_closed=1,out_closed=1")
        import bwgraphs.bw as bwmod
        assert t == bwmod.topological_type(annulus_generator())

    def test_two_components(self):
        t = parse_type_spec("g=0,in_closed=1+g=0,in_open=1")
        assert len(t.components) == 2


class TestCommands:
    def test_homology_annulus(self, tmp_path, capsys):
        code, out, _ = run_cli(
            ["homology", "--type", "g=0,in_closed=1,out_closed=1"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].split() == ["n", "#gens", "betti", "torsion"]
        assert lines[1].split() == ["0", "1", "1", "-"]
        assert lines[2].split() == ["1", "1", "1", "-"]

    def test_dsq_check(self, capsys):
        code, out, _ = run_cli(
            ["dsq-check", "--type", "g=0,in_closed=1,out_closed=1"], capsys)
        assert code == 0
        assert out.strip() == "OK"

    def test_validate_bad_involution(self, tmp_path, capsys):
        bad = {"half_edges": 2, "involution": [0, 1], "sigma": [1, 0],
               "source": [0, 0], "leaves": []}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, out, err = run_cli(["validate", str(path)], capsys)
        assert code == 1
        assert "FixedPointInvolution" in err

    def test_validate_and_info_roundtrip(self, tmp_path, capsys):
        g = annulus_generator()
        path = tmp_path / "annulus.json"
        path.write_text(json.dumps(g.to_json_dict()))
        code, out, _ = run_cli(["validate", str(path)], capsys)
        assert code == 0
        assert out.strip() == "OK"
        code, out, _ = run_cli(["info", str(path)], capsys)
        assert code == 0
        assert "out_closed=1" in out

    def test_compose_cli(self, tmp_path, capsys):
        g = annulus_generator()
        p1 = tmp_path / "a.json"
        p1.write_text(json.dumps(g.to_json_dict()))
        code, out, _ = run_cli(["compose", str(p1), str(p1)], capsys)
        assert code == 0
        assert out.startswith("+1 * ")

    def test_glue_metric_cli(self, tmp_path, capsys):
        from fractions import Fraction
        oc = minimal_annulus_oc()
        lengths = {e: Fraction(1) for e in oc.graph.edges()}
        m = MetricAdmissibleGraph.make(oc, lengths)
        path = tmp_path / "m.json"
        path.write_text(json.dumps(m.to_json_dict()))
        out_path = tmp_path / "out.json"
        code, _, _ = run_cli(
            ["glue-metric", str(path), str(path), "-o", str(out_path)],
            capsys)
        assert code == 0
        reread = MetricAdmissibleGraph.from_json_dict(
            json.loads(out_path.read_text()))
        from bwgraphs.metric import validate_metric
        validate_metric(reread)

    def test_export_dot(self, tmp_path, capsys):
        g = annulus_generator()
        path = tmp_path / "a.json"
        path.write_text(json.dumps(g.to_json_dict()))
        code, out, _ = run_cli(["export-dot", str(path)], capsys)
        assert code == 0
        assert "doublecircle" in out

    def test_enumerate(self, capsys):
        code, out, _ = run_cli(
            ["enumerate", "--type", "g=0,in_closed=1,out_closed=1"], capsys)
        assert code == 0
        assert "0  1" in out.replace("      ", "  ")

    def test_determinism(self, capsys):
        args = ["homology", "--type", "g=0,in_closed=1,out_closed=1",
                "--format", "json"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2

    def test_json_round_trip(self, tmp_path, capsys):
        g = annulus_generator()
        path = tmp_path / "a.json"
        path.write_text(json.dumps(g.to_json_dict()))
        from bwgraphs.cli import load_graph
        import bwgraphs.bw as bwmod
        assert bwmod.bw_key(load_graph(str(path))) == bwmod.bw_key(g)
