import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from lrmkit import __version__
from lrmkit.corpus import ALL, LEXICON_ENV, RunConfig, analyze, corpus_records, ingest_corpus, load_resources
from lrmkit.errors import DuplicateSongId, NoFilesFound, ReportIOError
from lrmkit.keywords import ExtractorParams
from lrmkit.lrm_format import parse_lrm
from lrmkit.metrics import COMPOSITION, lrm_score
from lrmkit.report import csv_tables, emit, render_json, render_table
from lrmkit.synthetic import write_corpus

from conftest import FIXTURE_DIR, FIXTURE_FILE, KEYWORD_FLAGS

GOOD = "TITLE: {t}\nTIMESIG: 3 4\nla 1 (4) 0 (4) 0 (4)\nlove 1 (2.5)\n"


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("lrmkit").joinpath("data/report.schema.json").read_text())


@pytest.fixture(scope="module")
def fixture_corpus():
    return ingest_corpus(FIXTURE_DIR)


@pytest.fixture(scope="module")
def given_report(fixture_corpus):
    return analyze(fixture_corpus, keyword_flags={"red_river_valley": KEYWORD_FLAGS})


@pytest.fixture
def mixed_dir(tmp_path):
    (tmp_path / "a.lrm").write_text(GOOD.format(t="A"))
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "b.lrm").write_text(GOOD.format(t="B"))
    (tmp_path / "c.lrm").write_text("TITLE: C\nTIMESIG: 3 4\nla 7 (4)\n")
    (tmp_path / "notes.txt").write_text("ignored")
    return tmp_path


class TestIngest:
    def test_fixture(self, fixture_corpus):
        assert [cs.song_id for cs in fixture_corpus.songs] == ["red_river_valley"]
        assert list(fixture_corpus.groups) == ["4/4"]
        assert fixture_corpus.fatal_count == 0

    def test_malformed_file_excluded(self, mixed_dir):
        corpus = ingest_corpus(mixed_dir)
        assert [cs.song_id for cs in corpus.songs] == ["a", "b"]
        assert corpus.excluded == ["c"]
        (diag,) = corpus.diagnostics["c"]
        assert (diag.code, diag.severity, diag.line, diag.column) == ("BadBeatCode", "fatal", 3, 4)

    def test_single_file(self):
        assert len(ingest_corpus(FIXTURE_FILE).songs) == 1

    def test_empty_dir(self, tmp_path):
        with pytest.raises(NoFilesFound):
            ingest_corpus(tmp_path)

    def test_missing_path(self, tmp_path):
        with pytest.raises(NoFilesFound):
            ingest_corpus(tmp_path / "nope")

    def test_duplicate_ids(self, tmp_path):
        (tmp_path / "x").mkdir()
        (tmp_path / "a.lrm").write_text(GOOD.format(t="A"))
        (tmp_path / "x" / "a.lrm").write_text(GOOD.format(t="A2"))
        with pytest.raises(DuplicateSongId):
            ingest_corpus(tmp_path)

    def test_meter_diagnostics_collected(self, tmp_path):
        (tmp_path / "bad.lrm").write_text("TITLE: B\nTIMESIG: 3 4\nla 1 (4) 2 (4) 0 (4)\n")
        corpus = ingest_corpus(tmp_path)
        assert [d.code for d in corpus.diagnostics["bad"]] == ["second-strong-offset"]
        assert corpus.fatal_count == 0

    def test_other_denominator_kept(self, tmp_path):
        (tmp_path / "e.lrm").write_text("TITLE: E\nTIMESIG: 6 8\nla 1 (4)\n")
        corpus = ingest_corpus(tmp_path)
        assert "meter-unchecked" in [d.code for d in corpus.diagnostics["e"]]
        assert len(corpus.songs) == 1


class TestAnalyze:
    def test_word_group_with_given_flags(self, given_report):
        g = given_report.group("word")
        assert g["confusion"]["strong_vs_weak"] == {"ssb": 6, "swb": 2, "usb": 3, "uwb": 6}
        assert g["exact"]["accuracy"] == "12/17" and g["display"]["accuracy"] == "0.706"
        assert g["exact"]["sm"] == g["exact"]["nm"] == g["exact"]["lrm_score"] == "3/4"
        assert g["conditional"]["strong_vs_weak"]["SWB|S"] == 0.25
        assert given_report.metadata["keyword_source"] == "given"

    def test_syllable_group_from_lexicon(self, given_report):
        g = given_report.group("syllable")
        assert g["records"] == 19
        assert g["confusion"]["strong_vs_weak"] == {"ssb": 9, "swb": 8, "usb": 1, "uwb": 1}
        assert g["exact"]["sm"] == "9/17" and g["exact"]["nm"] == "1/9"
        assert g["distribution"]["stressed"] == 17

    def test_group_layout(self, given_report):
        keys = [(g["kind"], g["timesig"]) for g in given_report.groups]
        assert keys == [(k, ts) for k in ("word", "syllable") for ts in (ALL, "3/4", "4/4")]

    def test_empty_group_is_not_an_error(self, given_report):
        g = given_report.group("word", "3/4")
        assert g["records"] == 0 and g["metrics"]["accuracy"] is None
        assert g["errors"]["accuracy"] == "EmptyCounts"
        assert g["distribution"] is None

    def test_timesig_filter(self, fixture_corpus):
        report = analyze(fixture_corpus, RunConfig(timesig_filter="3/4"))
        assert [(g["kind"], g["timesig"], g["records"]) for g in report.groups] == [
            ("word", "3/4", 0), ("syllable", "3/4", 0)
        ]

    def test_kind_filter_and_nm_mode(self, fixture_corpus):
        report = analyze(fixture_corpus, RunConfig(kind_filter="word", nm_mode=COMPOSITION),
                         keyword_flags={"red_river_valley": KEYWORD_FLAGS})
        assert {g["kind"] for g in report.groups} == {"word"}
        g = report.group("word")
        assert g["exact"]["nm"] == "2/3" and g["exact"]["nm_paper_formula"] == "3/4"
        assert g["metrics"]["lrm_score"] == pytest.approx(float(lrm_score(Fraction(3, 4), Fraction(2, 3))))

    def test_without_pickups(self, fixture_corpus):
        report = analyze(fixture_corpus, RunConfig(include_pickups=False))
        assert report.group("word")["records"] == 15

    def test_metadata(self, given_report):
        meta = given_report.metadata
        assert meta["version"] == __version__
        assert meta["config"] == RunConfig().to_dict()
        assert meta["lexicon_version"] == "cmudict-1.1.3-subset"
        assert meta["stoplist_id"] == "glasgow-318"
        assert meta["nm_mode"] == "paper_formula"

    def test_summary_and_songs(self, given_report):
        assert given_report.summary["oov_rate"] == 0
        assert given_report.summary["keyword_proportion"] == pytest.approx(8 / 17)
        (song,) = given_report.songs
        assert song["song_id"] == "red_river_valley"
        assert 0 <= song["rake_yake_jaccard"] <= 1

    def test_regression_needs_two_songs(self, given_report):
        reg = given_report.group("word")["regression"]
        assert reg["points"] == [{"song_id": "red_river_valley", "weak_beats": 8, "stressed_on_weak": 2}]
        assert reg["fit"] is None and reg["error"] == "DegenerateX"

    def test_excluded_corpus(self, tmp_path):
        (tmp_path / "c.lrm").write_text("nothing here\n")
        with pytest.raises(NoFilesFound):
            analyze(ingest_corpus(tmp_path))

    def test_records_export(self, fixture_corpus):
        recs = corpus_records(fixture_corpus)
        assert len(recs) == 17 + 19

    def test_lexicon_env(self, monkeypatch, tmp_path):
        path = tmp_path / "lex.dict"
        path.write_text("LA  L AA1\n")
        monkeypatch.setenv(LEXICON_ENV, str(path))
        lex, _ = load_resources(RunConfig())
        assert lex.version == "lex.dict" and len(lex) == 1

    def test_extractor_params_recorded(self, fixture_corpus):
        config = RunConfig(extractor="rake", params=ExtractorParams(selection="top_k", value=2))
        report = analyze(fixture_corpus, config)
        assert report.metadata["config"]["params"]["selection"] == "top_k"
        assert report.metadata["extractor"] == "rake"


class TestEmit:
    def test_schema(self, given_report, schema):
        jsonschema.validate(json.loads(render_json(given_report)), schema)

    def test_schema_on_synthetic(self, tmp_path, schema):
        write_corpus(tmp_path, 6, seed=3)
        report = analyze(ingest_corpus(tmp_path))
        jsonschema.validate(json.loads(render_json(report)), schema)
        assert report.group("word")["regression"]["fit"]["n"] == 6

    def test_json_round_trip(self, given_report):
        data = json.loads(render_json(given_report))
        again = type(given_report).from_dict(data)
        assert render_json(again) == render_json(given_report)

    def test_table_rows(self, given_report):
        lines = render_table(given_report).splitlines()
        assert "Word | All | 0.706 0.750 0.750 0.750" in lines
        assert "Word | 3/4 | - - - -" in lines
        assert sum(line.startswith("Syllable | ") for line in lines) == 3

    def test_csv_files(self, given_report, tmp_path):
        written = emit(given_report, "csv", tmp_path / "out")
        assert sorted(p.name for p in written) == sorted(csv_tables(given_report))
        metrics = (tmp_path / "out" / "metrics.csv").read_text().splitlines()
        per_group = len(given_report.groups[0]["metrics"])
        assert len(metrics) - 1 == len(given_report.groups) * per_group
        assert "word,All,accuracy,0.7058823529411765,12/17,0.706," in metrics

    def test_csv_needs_directory(self, given_report, tmp_path):
        with pytest.raises(ReportIOError):
            emit(given_report, "csv", None)
        (tmp_path / "file").write_text("")
        with pytest.raises(ReportIOError):
            emit(given_report, "csv", tmp_path / "file")

    def test_json_file(self, given_report, tmp_path):
        (path,) = emit(given_report, "json", tmp_path / "r.json")
        assert json.loads(path.read_text())["metadata"]["tool"] == "lrmkit"

    def test_unknown_format(self, given_report):
        with pytest.raises(ValueError):
            emit(given_report, "xml", None)

    def test_deterministic(self, fixture_corpus, tmp_path):
        a = render_json(analyze(fixture_corpus))
        b = render_json(analyze(ingest_corpus(FIXTURE_DIR)))
        assert a == b
        emit(analyze(fixture_corpus), "csv", tmp_path / "1")
        emit(analyze(fixture_corpus), "csv", tmp_path / "2")
        for f in (tmp_path / "1").iterdir():
            assert f.read_bytes() == (tmp_path / "2" / f.name).read_bytes()


def test_run_config_validation():
    for bad in ({"extractor": "tfidf"}, {"nm_mode": "x"}, {"kind_filter": "phrase"}, {"output_format": "xml"}):
        with pytest.raises(ValueError):
            RunConfig(**bad)


def test_song_without_words(tmp_path):
    (tmp_path / "empty.lrm").write_text("TITLE: E\nTIMESIG: 4 4\n")
    (tmp_path / "a.lrm").write_text(GOOD.format(t="A"))
    report = analyze(ingest_corpus(tmp_path))
    assert [s["words"] for s in report.songs] == [2, 0]
    assert parse_lrm((tmp_path / "empty.lrm").read_text()).words == []
