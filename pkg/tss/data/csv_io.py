"""Dataset CSV: one row per (sample, channel), columns are time points.

    # tss-dataset v1
    # classes: 0:walking;1:running
    sample,channel,label,t0,t1,...
    0,0,walking,0.1,0.2,...
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Dict, List

import numpy as np

from tss.errors import DatasetError
from tss.model.dataset import LabeledDataset
from tss.model.series import TimeSeries
from tss.utils.io import PathLike, atomic_write_text

FORMAT_TAG = "# tss-dataset v1"
CLASSES_PREFIX = "# classes:"


class DatasetParser:

    @staticmethod
    def dumps(dataset: LabeledDataset) -> str:
        buf = io.StringIO()
        for name in dataset.class_names.values():
            if not name or any(ch in name for ch in ";,:\n"):
                raise DatasetError(f"class name {name!r} cannot be written")
        entries = [f"{c}:{dataset.class_names[c]}" for c in dataset.class_ids]
        buf.write(FORMAT_TAG + "\n")
        buf.write(f"{CLASSES_PREFIX} {';'.join(entries)}\n")
        channels, length = dataset.shape
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample", "channel", "label"] + [f"t{i}" for i in range(length)])
        for n, (s, label) in enumerate(zip(dataset.samples, dataset.labels)):
            name = dataset.class_names[label]
            for ch in range(channels):
                w.writerow([n, ch, name] + [repr(float(v)) for v in s.values[ch]])
        return buf.getvalue()

    @staticmethod
    def save_csv(dataset: LabeledDataset, path: PathLike) -> Path:
        return atomic_write_text(path, DatasetParser.dumps(dataset))

    @staticmethod
    def _parse_classes(text: str) -> Dict[int, str]:
        """`id:name;id:name;...`, or bare `name;name;...` with ids taken by position."""
        entries = [e.strip() for e in text.split(";") if e.strip()]
        if not entries:
            raise DatasetError("class list is empty", line=2)
        with_ids = [":" in e for e in entries]
        if any(with_ids) and not all(with_ids):
            raise DatasetError("class list mixes id:name and bare name entries", line=2)
        if not any(with_ids):
            pairs = list(enumerate(entries))
        else:
            pairs = []
            for entry in entries:
                raw_id, _, name = entry.partition(":")
                try:
                    pairs.append((int(raw_id), name.strip()))
                except ValueError:
                    raise DatasetError(f"class entry {entry!r} has a non-integer id", line=2)
        ids = [c for c, _ in pairs]
        names = [n for _, n in pairs]
        if not all(names) or len(set(names)) != len(names) or len(set(ids)) != len(ids):
            raise DatasetError("class list has empty or duplicate ids or names", line=2)
        return dict(pairs)

    @staticmethod
    def loads(text: str) -> LabeledDataset:
        lines = text.splitlines()
        if not lines or not "".join(lines).strip():
            raise DatasetError("empty dataset file", line=1)
        if lines[0].strip() != FORMAT_TAG:
            raise DatasetError(f"expected format tag {FORMAT_TAG!r}", line=1)
        if len(lines) < 2 or not lines[1].startswith(CLASSES_PREFIX):
            raise DatasetError(f"expected '{CLASSES_PREFIX} ...' line", line=2)
        class_names = DatasetParser._parse_classes(lines[1][len(CLASSES_PREFIX):])
        ids = {name: c for c, name in class_names.items()}

        reader = csv.reader(lines[2:])
        header = next(reader, None)
        if not header or header[:3] != ["sample", "channel", "label"] or len(header) < 5:
            raise DatasetError("expected header 'sample,channel,label,t0,t1,...' with at least two time points", line=3)
        length = len(header) - 3

        rows: Dict[int, List] = {}
        order: List[int] = []
        for offset, row in enumerate(reader):
            lineno = offset + 4
            if not row or row[0].startswith("#"):
                continue
            if len(row) != len(header):
                raise DatasetError(f"expected {len(header)} cells, found {len(row)}", line=lineno)
            try:
                sample, channel = int(row[0]), int(row[1])
            except ValueError:
                raise DatasetError(f"non-integer sample/channel cell in {row[:2]}", line=lineno)
            label = row[2]
            if label not in ids:
                raise DatasetError(f"unknown label {label!r}", line=lineno)
            try:
                values = [float(v) for v in row[3:]]
            except ValueError as e:
                raise DatasetError(f"non-numeric cell: {e}", line=lineno)
            if not all(np.isfinite(values)):
                raise DatasetError("non-finite value", line=lineno)
            if sample not in rows:
                rows[sample] = [label, [], lineno]
                order.append(sample)
            entry = rows[sample]
            if entry[0] != label:
                raise DatasetError(f"sample {sample} changes label from {entry[0]!r} to {label!r}", line=lineno)
            if channel != len(entry[1]):
                raise DatasetError(f"sample {sample}: expected channel {len(entry[1])}, found {channel}", line=lineno)
            entry[1].append(values)

        if not order:
            raise DatasetError("dataset file has no rows", line=len(lines))
        channels = len(rows[order[0]][1])
        samples, labels = [], []
        for sample in order:
            label, chans, first_line = rows[sample]
            if len(chans) != channels:
                raise DatasetError(f"sample {sample} has {len(chans)} channels, expected {channels}", line=first_line)
            samples.append(TimeSeries(np.array(chans, dtype=np.float64).reshape(channels, length)))
            labels.append(ids[label])
        return LabeledDataset(samples=samples, labels=labels, class_names=class_names)

    @staticmethod
    def load_csv(path: PathLike) -> LabeledDataset:
        path = Path(path)
        if not path.exists():
            raise DatasetError(f"dataset file {path} does not exist")
        return DatasetParser.loads(path.read_text())


def load_csv(path: PathLike) -> LabeledDataset:
    return DatasetParser.load_csv(path)


def save_csv(dataset: LabeledDataset, path: PathLike) -> Path:
    return DatasetParser.save_csv(dataset, path)
