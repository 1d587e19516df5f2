"""아카이브(.ts) / CSV 입출력 테스트"""

import sys

import numpy as np
import pandas as pd
import pytest

from errors import (
    IoFailure,
    InvalidDataset,
    MalformedHeader,
    MalformedValue,
    MissingValue,
    NonFiniteValue,
    RaggedData,
    UnknownLabel,
)
from io_utils import (
    dump_json,
    format_archive,
    load_json,
    parse_archive_file,
    read_csv_dataset,
    read_dataset,
    write_archive_file,
    write_csv_dataset,
)
from tsdata import MtsDataset, restrict

HEADER = """@problemName Tiny
@dimensions 2
@equalLength true
@seriesLength 2
@classLabel true A B
@data
"""


def write(tmp_path, text, name="tiny.ts"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def random_dataset(rng, with_names=False):
    n = int(rng.integers(2, 12))
    c = int(rng.integers(1, 6))
    length = int(rng.integers(1, 15))
    k = int(rng.integers(2, min(n, 4) + 1))
    labels = rng.permutation(np.arange(n) % k)
    scale = 10.0 ** rng.integers(-6, 6)
    names = tuple(f"s{i}" for i in range(c)) if with_names else None
    return MtsDataset(
        name="Rand",
        values=rng.normal(size=(n, c, length)) * scale,
        labels=labels,
        label_names=tuple(f"cls{i}" for i in range(k)),
        channel_names=names,
    )


def test_minimal_file(tmp_path):
    ds = parse_archive_file(write(tmp_path, HEADER + "1,2:3,4:A\n"))
    assert (ds.n_instances, ds.n_channels, ds.length) == (1, 2, 2)
    assert ds.name == "Tiny"
    assert ds.label_strings() == ["A"]
    np.testing.assert_array_equal(ds.values[0], [[1, 2], [3, 4]])


def test_wrong_channel_length(tmp_path):
    with pytest.raises(RaggedData):
        parse_archive_file(write(tmp_path, HEADER + "1,2:3:A\n"))


def test_wrong_channel_count(tmp_path):
    with pytest.raises(RaggedData):
        parse_archive_file(write(tmp_path, HEADER + "1,2:A\n"))


def test_header_errors(tmp_path):
    with pytest.raises(MalformedHeader):
        parse_archive_file(write(tmp_path, HEADER.replace("@classLabel true A B\n", "") + "1,2:3,4:A\n"))
    with pytest.raises(MalformedHeader):
        parse_archive_file(write(tmp_path, "@dimensions 2\n@dimensions 2\n@classLabel true A\n@data\n"))
    with pytest.raises(MalformedHeader):
        parse_archive_file(write(tmp_path, "@problemName X\n@classLabel true A B\n"))
    with pytest.raises(MalformedHeader):
        parse_archive_file(write(tmp_path, "@bogusTag 1\n@classLabel true A B\n@data\n1:A\n"))
    with pytest.raises(RaggedData):
        parse_archive_file(write(tmp_path, "@equalLength false\n@classLabel true A B\n@data\n1:A\n"))


def test_other_header_tags_accepted_case_insensitively(tmp_path):
    text = ("@PROBLEMNAME Tags\n@univariate false\n@timeStamps false\n@missing false\n"
            "@targetLabel false\n@classlabel true A B\n@DATA\n1,2:B\n")
    ds = parse_archive_file(write(tmp_path, text))
    assert ds.name == "Tags"
    assert ds.label_strings() == ["B"]


def test_timestamps_rejected(tmp_path):
    with pytest.raises(MalformedHeader):
        parse_archive_file(write(tmp_path, "@timeStamps true\n@classLabel true A B\n@data\n1:A\n"))


def test_value_errors(tmp_path):
    with pytest.raises(MissingValue):
        parse_archive_file(write(tmp_path, HEADER + "1,?:3,4:A\n"))
    with pytest.raises(MalformedValue):
        parse_archive_file(write(tmp_path, HEADER + "1,x:3,4:A\n"))
    with pytest.raises(NonFiniteValue):
        parse_archive_file(write(tmp_path, HEADER + "1,inf:3,4:A\n"))
    with pytest.raises(UnknownLabel):
        parse_archive_file(write(tmp_path, HEADER + "1,2:3,4:C\n"))
    with pytest.raises(InvalidDataset):
        parse_archive_file(write(tmp_path, HEADER))


def test_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        parse_archive_file(tmp_path / "nope.ts")


def test_write_line_format():
    ds = MtsDataset("One", np.array([[[1.5, 2.0, 2.5]]]), [0], ("A", "B"))
    text = format_archive(ds)
    assert "1.5,2.0,2.5:A" in text.splitlines()
    assert not any(line.startswith("#") for line in text.splitlines())


def test_channel_names_written_as_comments(tmp_path):
    ds = MtsDataset("Named", np.zeros((2, 2, 3)), [0, 1], ("A", "B"), channel_names=("hip", "knee"))
    path = tmp_path / "named.ts"
    write_archive_file(ds, path)
    assert path.read_text(encoding="utf-8").startswith("# channel 0 hip\n# channel 1 knee\n")
    assert parse_archive_file(path).channel_names == ("hip", "knee")


def test_invalid_label_token_rejected():
    ds = MtsDataset("Bad", np.zeros((2, 1, 2)), [0, 1], ("a b", "c"))
    with pytest.raises(MalformedHeader):
        format_archive(ds)


def test_round_trip_random_datasets(tmp_path):
    rng = np.random.default_rng(2024)
    for i in range(100):
        ds = random_dataset(rng, with_names=bool(i % 2))
        path = tmp_path / f"r{i}.ts"
        write_archive_file(ds, path)
        assert parse_archive_file(path) == ds


def test_serialized_size_scales_with_channels(tmp_path):
    rng = np.random.default_rng(5)
    ds = MtsDataset("Size", rng.normal(size=(20, 10, 30)), np.arange(20) % 2, ("A", "B"))
    full = len(format_archive(ds))
    reduced = len(format_archive(restrict(ds, [1, 4, 7])))
    assert abs(reduced / full - 0.3) < 0.1


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    ds = random_dataset(rng)
    write_csv_dataset(ds, tmp_path / "vals.csv", tmp_path / "vals_labels.csv")
    loaded = read_csv_dataset(tmp_path / "vals.csv", tmp_path / "vals_labels.csv",
                              name="Rand", label_names=ds.label_names)
    assert loaded.labels.tolist() == ds.labels.tolist()
    np.testing.assert_allclose(loaded.values, ds.values, rtol=1e-15)
    # 확장자로 형식 선택, 라벨 파일은 기본 이름
    assert read_dataset(tmp_path / "vals.csv").n_instances == ds.n_instances


def test_csv_wrong_columns(tmp_path):
    pd.DataFrame({"i": [0], "c": [0], "t": [0], "v": [1.0]}).to_csv(tmp_path / "v.csv", index=False)
    pd.DataFrame({"instance": [0], "label": ["A"]}).to_csv(tmp_path / "l.csv", index=False)
    with pytest.raises(MalformedHeader):
        read_csv_dataset(tmp_path / "v.csv", tmp_path / "l.csv")


def test_csv_missing_cell(tmp_path):
    pd.DataFrame({"instance": [0, 0], "channel": [0, 0], "time": [0, 2], "value": [1.0, 2.0]}).to_csv(
        tmp_path / "v.csv", index=False)
    pd.DataFrame({"instance": [0], "label": ["A"]}).to_csv(tmp_path / "l.csv", index=False)
    with pytest.raises(RaggedData):
        read_csv_dataset(tmp_path / "v.csv", tmp_path / "l.csv")


def test_non_utf8_archive(tmp_path):
    path = tmp_path / "bin.ts"
    path.write_bytes(HEADER.encode("utf-8") + b"1,2:3,\xff\xfe:A\n")
    with pytest.raises(MalformedValue):
        parse_archive_file(path)


def test_csv_unterminated_quote(tmp_path):
    (tmp_path / "v.csv").write_text('instance,channel,time,value\n0,0,0,"1.0\n', encoding="utf-8")
    pd.DataFrame({"instance": [0], "label": ["A"]}).to_csv(tmp_path / "l.csv", index=False)
    with pytest.raises(MalformedValue):
        read_csv_dataset(tmp_path / "v.csv", tmp_path / "l.csv")


def test_csv_empty_and_non_integer_index(tmp_path):
    (tmp_path / "empty.csv").write_text("", encoding="utf-8")
    pd.DataFrame({"instance": [0], "label": ["A"]}).to_csv(tmp_path / "l.csv", index=False)
    with pytest.raises(MalformedValue):
        read_csv_dataset(tmp_path / "empty.csv", tmp_path / "l.csv")

    pd.DataFrame({"instance": [0.5], "channel": [0], "time": [0], "value": [1.0]}).to_csv(
        tmp_path / "v.csv", index=False)
    with pytest.raises(MalformedValue):
        read_csv_dataset(tmp_path / "v.csv", tmp_path / "l.csv")


def test_load_json_non_utf8(tmp_path):
    path = tmp_path / "sel.json"
    path.write_bytes(b'{"a": "\xff"}')
    with pytest.raises(MalformedValue):
        load_json(path)


def test_dump_json_compact_and_pretty():
    assert dump_json({"a": [1, 2]}) == '{"a":[1,2]}'
    assert dump_json({"a": 1}, pretty=True) == '{\n  "a": 1\n}'


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
