import os
import sys
import logging
import argparse
from tabulate import tabulate

from commandHelper import CommandHelper
from experimentConfig import load_config
from labErrors import ConfigError, LabError, NumericalError
from resultWriter import ResultWriter
from taskTimer import TaskTimer

VERSION = "0.1.0"

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

logger = logging.getLogger(__name__)


def error_record(error):
    record = {"error": type(error).__name__, "message": str(error)}
    if isinstance(error, ConfigError):
        record["issues"] = [{"line": line, "message": message} for line, message in error.issues]
    if isinstance(error, NumericalError):
        record["residual"] = error.residual
    return record


class ExperimentRunner:
    """Runs one validated config: dispatches to its command, writes the result files
    and the manifest, and turns the declared checks into an exit code."""

    def __init__(self, config, out_dir, threads = 1, show_progress = True, printFunc = print):
        self.config = config
        self.out_dir = out_dir
        self.threads = threads
        self.show_progress = show_progress
        self.print = printFunc

        self.writer = ResultWriter(out_dir)
        self.timer = TaskTimer()

    def run(self):

        command = CommandHelper.get_command(self.config.command)
        self.writer.clear_error()

        try:
            checks, summary = command.run(self.config, self.writer, self.timer, self.threads, self.show_progress)
        except LabError as e:
            logger.error("%s failed: %s", self.config.command, e)
            self.writer.write_error(error_record(e))
            self.print(f"{type(e).__name__}: {e}")
            return EXIT_NUMERICAL, None

        passed = all(c.passed for c in checks)
        manifest = {
            "version": VERSION,
            "command": self.config.command,
            "config": self.config.echo(),
            "wall_time": self.timer.total(),
            "timings": dict(self.timer.timings),
            "checks": [c.to_json() for c in checks],
            "passed": passed,
            "files": list(self.writer.files),
            "summary": summary
        }
        self.writer.write_manifest(manifest)

        self.print_summary(checks)

        return (EXIT_PASS if passed else EXIT_CHECK_FAILED), manifest

    def print_summary(self, checks):

        if len(checks) > 0:
            self.print(tabulate([c.row() for c in checks], headers=["Check", "Result", "Value", "Threshold"]))
            self.print()

        self.print(tabulate(self.timer.summary_lines(), headers=["Phase", "Seconds"]))
        self.print("Results written to", self.out_dir)

    @staticmethod
    def default_out_dir(config_path):
        name = os.path.splitext(os.path.basename(config_path))[0]
        return os.path.join("results", name)

    @staticmethod
    def run_file(config_path, out_dir = None, threads = 1, show_progress = True, printFunc = print):
        """Exit code of running the config at config_path."""

        try:
            config = load_config(config_path)
        except ConfigError as e:
            target = out_dir if out_dir is not None else ExperimentRunner.default_out_dir(config_path)
            ResultWriter(target).write_error(error_record(e))
            for issue in e.issues:
                printFunc(config_path + ": " + ConfigError.format_issue(issue))
            return EXIT_CONFIG

        if out_dir is None:
            out_dir = config.output if config.output is not None else ExperimentRunner.default_out_dir(config_path)

        code, _ = ExperimentRunner(config, out_dir, threads, show_progress, printFunc).run()
        return code


def main(argv = None):

    parser = argparse.ArgumentParser(description="Runs one experiment config and writes its CSV/NDJSON results.")
    parser.add_argument('--config', type=str, required=True, help="Path to a TOML experiment config.")
    parser.add_argument('--out', type=str, default=None, help="Output directory (overrides the config's output key).")
    parser.add_argument('--threads', type=int, default=1, help="Cap on internal parallelism (-1 uses every core).")
    parser.add_argument('--quiet', dest='quiet', action='store_true', help="Hide progress bars.")
    parser.add_argument('--verbose', dest='verbose', action='store_true', help="Log diagnostics from the numerical modules.")

    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    if args.threads == 0 or args.threads < -1:
        parser.error("--threads must be positive or -1.")

    return ExperimentRunner.run_file(args.config, args.out, args.threads, not args.quiet)


if __name__ == "__main__":
    sys.exit(main())
