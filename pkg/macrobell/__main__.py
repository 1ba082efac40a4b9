import argparse
import logging
import os
import sys

from macrobell.bell import BellUtils
from macrobell.harness import ReportIO, load_config, run_scenario, shipped_configs
from macrobell.trees import FamilyRenderer, TreeUtils
from macrobell.utils import MacroBellError


def _print_report(report):
    print(report.to_table().to_string(index=False))
    print("{}: {} ({} trials, {:.1f}s)".format(
        report.config.name, "PASS" if report.passed else "FAIL",
        len(report.records), report.wall_clock_seconds))


def run(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    report = run_scenario(config)
    io = ReportIO(os.path.dirname(args.output) if args.output else "./reports")
    io.save_report(report, args.output)
    if args.csv:
        io.save_csv(report, args.csv)
    _print_report(report)
    return report.passed


def verify_all(args):
    io = ReportIO(args.output_dir)
    passed = True
    for path in shipped_configs():
        config = load_config(path)
        if args.seed is not None:
            config = config.with_seed(args.seed)
        config.output = None
        report = run_scenario(config)
        io.save_report(report)
        _print_report(report)
        passed = passed and report.passed
    print("verify-all: {}".format("PASS" if passed else "FAIL"))
    return passed


def tree(args):
    family = TreeUtils.folded_tree(args.k) if args.folded else TreeUtils.simple_tree(args.k)
    print(FamilyRenderer.render_ascii(family))
    verified = TreeUtils.verify_anticommuting(family)
    print("anti-commuting: {}".format(verified))
    return verified


def budget(args):
    print(BellUtils.settings_budget(args.n, args.m))
    return True


def main(argv=None):
    parser = argparse.ArgumentParser(prog="macrobell",
                                     description="Macroscopic Bell correlation checks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    parser_run = commands.add_parser("run", help="run one scenario config")
    parser_run.add_argument("config")
    parser_run.add_argument("--output", help="report path. Default: reports/<name>.json")
    parser_run.add_argument("--csv", help="also write per-trial records as CSV")
    parser_run.add_argument("--seed", type=int, help="override the config seed")
    parser_run.set_defaults(handler=run)

    parser_all = commands.add_parser("verify-all", help="run every shipped config")
    parser_all.add_argument("--output-dir", default="reports")
    parser_all.add_argument("--seed", type=int, help="override every config seed")
    parser_all.set_defaults(handler=verify_all)

    parser_tree = commands.add_parser("tree", help="print an anti-commuting family")
    parser_tree.add_argument("--k", type=int, required=True)
    parser_tree.add_argument("--folded", action="store_true")
    parser_tree.set_defaults(handler=tree)

    parser_budget = commands.add_parser("budget", help="settings budget floor(n / m)")
    parser_budget.add_argument("--n", type=int, required=True, help="spins per region")
    parser_budget.add_argument("--m", type=int, required=True, help="spins per block")
    parser_budget.set_defaults(handler=budget)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        passed = args.handler(args)
    except MacroBellError as e:
        logging.error("{}: {}".format(type(e).__name__, e))
        return 2
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
