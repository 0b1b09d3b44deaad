"""
hide: data-hider role
"""
import argparse

from config.settings import settings
from models.commands import CommandConfig
from services.pipeline_service import pipeline_service


def register(subparsers):
    parser = subparsers.add_parser("hide", help="Embed a payload file into a marked encrypted image")
    parser.add_argument("input", help="Marked encrypted PGM image")
    parser.add_argument("output", help="PGM image carrying the payload")
    parser.add_argument("--key-w", required=True, help="Data hiding key (hex)")
    parser.add_argument("--payload", required=True, help="Raw payload file, read MSB first per byte")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = CommandConfig(
        command="hide",
        input_path=args.input,
        output_path=args.output,
        key_w=args.key_w,
        payload_path=args.payload,
    )
    report = pipeline_service.hide(config.input_path, config.output_path, config.hiding_key, config.payload_path)
    print(f"Payload: {report.payload_bits} bits of {report.capacity_bits}")
    print(f"ER = {report.embedding_rate:.{settings.report_decimals}f} bpp")
    return 0
