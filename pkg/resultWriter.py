import os
import csv
import json
import numpy as np


def _plain(value):
    """JSON fallback for numpy scalars and arrays."""

    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class ResultWriter:
    """Writes the CSV and NDJSON files of one run into a single directory.

    Floats are written with repr so a rerun of the same config reproduces every
    file byte for byte.
    """

    MANIFEST = "manifest.ndjson"
    ERROR = "error.ndjson"

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.files = []

    @staticmethod
    def ensure_dir(file_path):
        directory = os.path.dirname(file_path)
        if len(directory) < 1:
            return
        if not os.path.exists(directory):
            os.makedirs(directory)

    @staticmethod
    def format_value(value):
        if value is None:
            return ""
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return repr(float(value))
        return str(value)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def _register(self, name):
        if name not in self.files:
            self.files.append(name)

    def write_csv(self, name, headers, rows):

        path = self.path(name)
        ResultWriter.ensure_dir(path)

        with open(path, "w", newline="", encoding="utf-8") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(headers)
            for row in rows:
                writer.writerow([ResultWriter.format_value(v) for v in row])

        self._register(name)
        return path

    def write_ndjson(self, name, records):

        path = self.path(name)
        ResultWriter.ensure_dir(path)

        with open(path, "w", encoding="utf-8") as file:
            for record in records:
                file.write(json.dumps(record, default=_plain) + "\n")

        self._register(name)
        return path

    def _write_atomic(self, name, record):

        path = self.path(name)
        ResultWriter.ensure_dir(path)
        temporary = path + ".tmp"

        with open(temporary, "w", encoding="utf-8") as file:
            file.write(json.dumps(record, default=_plain) + "\n")
        os.replace(temporary, path)

        return path

    def write_manifest(self, manifest):
        return self._write_atomic(ResultWriter.MANIFEST, manifest)

    def write_error(self, record):
        return self._write_atomic(ResultWriter.ERROR, record)

    def clear_error(self):
        path = self.path(ResultWriter.ERROR)
        if os.path.isfile(path):
            os.remove(path)
