import pytest

from linclass.archive import ArchiveError, CodeArchive, cell_path, format_count_rows, format_table
from linclass.cli import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, load_table, main
from linclass.code import LinearCode, from_generator_matrix, weight_enumerator

HAMMING = [[1, 0, 0, 0, 0, 1, 1], [0, 1, 0, 0, 1, 0, 1], [0, 0, 1, 0, 1, 1, 0], [0, 0, 0, 1, 1, 1, 1]]


def test_archive_round_trip(tmp_path):
    codes = [from_generator_matrix(HAMMING, 2), LinearCode.from_mult(2, 4, {0: 1, 1: 1, 3: 1, 7: 1, 14: 3})]
    arc = CodeArchive.from_codes(2, 7, 4, codes, complete=False, task="abc")
    path = tmp_path / "cell.txt"
    arc.save(path)
    back = CodeArchive.load(path)
    assert back.complete is False and back.task == "abc"
    assert back.codes == codes
    text = path.read_text()
    assert text.startswith("2 7 4 2\n#task abc\n1000011\n")
    assert text.endswith("\n\n#partial\n")


def test_archive_rejects_malformed_input():
    good = CodeArchive.from_codes(2, 7, 4, [from_generator_matrix(HAMMING, 2)]).dumps()
    CodeArchive.loads(good)
    for bad in (
        "",
        good.replace("#complete", ""),
        good.replace("2 7 4 1", "2 7 4 2"),
        good.replace("1000011", "100001"),
        good.replace("1000011", "1000012"),
        good.replace("\n\n#complete", "\n#complete"),
    ):
        with pytest.raises(ArchiveError):
            CodeArchive.loads(bad)
    with pytest.raises(ArchiveError):
        CodeArchive.from_codes(2, 8, 4, [from_generator_matrix(HAMMING, 2)])


def test_table_formatting(tmp_path):
    assert format_count_rows([(7, 4, 1, True), (9, 3, 2, False)]) == "n\tk\tcount\tcomplete\n7\t4\t1\tyes\n9\t3\t2\tno\n"
    assert format_table({9: [1, 2], 10: [1]}) == " 9: 1 2\n10: 1\n"
    assert cell_path(tmp_path, 7, 4).name == "n007_k04.txt"


def test_vendored_tables_load():
    t1 = load_table("binary_d3_counts.tsv")
    assert t1[(7, 4)] == 1 and t1[(12, 8)] == 2
    t4 = load_table("ternary_9div_counts.tsv")
    assert all(t4[(41, k)] == 0 for k in range(2, 9))
    t5 = load_table("binary_min_minimal_codewords.tsv")
    assert t5[(7, 4)] == 8


def test_classify_command(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["classify", "--q", "2", "--d", "3", "--nmax", "8", "--kmax", "4", "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "7\t4\t1\tyes" in text
    assert "\n8: 1 6 10 5\n" in text
    assert CodeArchive.load(cell_path(out, 7, 4)).codes[0].n == 7
    assert (out / "counts.tsv").exists()


def test_classify_cumulative(capsys):
    assert main(["classify", "--q", "2", "--d", "3", "--nmax", "7", "--kmax", "4", "--count-only", "--cumulative"]) == EXIT_OK
    assert "\n7: 5 8 5 1\n" in capsys.readouterr().out


def test_classify_partial_exit(capsys):
    argv = ["classify", "--q", "3", "--weights", "9,18,27", "--nmax", "30", "--kmax", "3", "--count-only", "--budget-nodes", "1"]
    assert main(argv) == EXIT_PARTIAL
    assert "\tno" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert main(["classify", "--q", "2", "--nmax", "7"]) == EXIT_USAGE
    assert main(["classify", "--q", "2", "--d", "3", "--nmax", "5", "--kmax", "9"]) == EXIT_USAGE
    assert main(["verify-tables", "no-such-suite"]) == EXIT_USAGE
    assert main(["invariants", "--input", "/nonexistent/file.txt"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--q", "two"])
    assert exc.value.code == EXIT_USAGE


def test_extend_and_invariants(tmp_path, capsys):
    parent = tmp_path / "p.txt"
    CodeArchive.from_codes(2, 6, 1, [LinearCode.from_mult(2, 1, {0: 6})]).save(parent)
    child = tmp_path / "c.txt"
    assert main(["extend", "--input", str(parent), "--r", "1", "--weights", "4,6", "--out", str(child)]) == EXIT_OK
    kids = CodeArchive.load(child).codes
    assert len(kids) == 1 and weight_enumerator(kids[0]).coeffs == (1, 0, 0, 0, 2, 0, 1, 0)
    capsys.readouterr()
    assert main(["invariants", "--input", str(child), "--delta", "2", "--aut"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "[7,2]_2" in text and "2-divisible: yes" in text
    assert "automorphism group order: 2" in text
    assert "minimal codewords: 3" in text


def test_macwilliams_command(capsys):
    assert main(["macwilliams", "--a", "1,0,0,7,7,0,0,1", "--q", "2", "--k", "4", "--check"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "B: 1 0 0 0 7 0 0 0" in text
    assert "moment 3" in text and "FAIL" not in text
    assert main(["macwilliams", "--a", "0:1,45:588,54:140", "--q", "3", "--k", "6", "--n", "70"]) == EXIT_OK
    assert "280x^3" in capsys.readouterr().out
    assert main(["macwilliams", "--a", "1,2,3", "--q", "2", "--k", "3"]) == EXIT_USAGE


def test_verify_tables_command(capsys):
    assert main(["verify-tables", "formula-k2", "--nmax", "12"]) == EXIT_OK
    assert "formula-k2: PASS" in capsys.readouterr().out
