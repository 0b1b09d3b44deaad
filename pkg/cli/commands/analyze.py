"""
analyze: capacity and ER over a directory of PGM images
"""
import argparse

from config.settings import settings
from models.commands import CommandConfig
from services.analysis_service import analysis_service


def register(subparsers):
    parser = subparsers.add_parser("analyze", help="Tabulate capacity and ER for every PGM in a directory")
    parser.add_argument("directory", help="Directory of PGM images")
    parser.add_argument("--out", required=True, help="CSV report path")
    parser.add_argument("--verify", action="store_true",
                        help="Run the full pipeline per image and record PSNR/SSIM")
    parser.add_argument("--workers", type=int, default=None, help="Parallel workers")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = CommandConfig(command="analyze", input_path=args.directory, output_path=args.out, verify=args.verify)
    rows, summary = analysis_service.analyze_directory(config.input_path, verify=config.verify,
                                                       workers=args.workers)
    analysis_service.write_report(config.output_path, rows, summary)
    decimals = settings.report_decimals
    print(f"{summary.images} images, {summary.failures} failed")
    print(f"ER best {summary.best_er:.{decimals}f} ({summary.best_file}), "
          f"worst {summary.worst_er:.{decimals}f} ({summary.worst_file}), "
          f"average {summary.average_er:.{decimals}f} bpp")
    return 0
