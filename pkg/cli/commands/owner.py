"""
owner-encrypt: content-owner role
"""
import argparse

from config.settings import settings
from models.commands import CommandConfig
from services.pipeline_service import pipeline_service


def register(subparsers):
    parser = subparsers.add_parser("owner-encrypt", help="Encrypt an image and embed its label map")
    parser.add_argument("input", help="Original PGM image")
    parser.add_argument("output", help="Marked encrypted PGM image")
    parser.add_argument("--key-e", required=True, help="Encryption key (hex)")
    parser.add_argument("--report", help="Write the capacity report table to this path")
    parser.add_argument("--encrypted", help="Also write the plain encrypted image here")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = CommandConfig(
        command="owner-encrypt",
        input_path=args.input,
        output_path=args.output,
        key_e=args.key_e,
        report_path=args.report,
        encrypted_path=args.encrypted,
    )
    report = pipeline_service.owner_encrypt(
        config.input_path, config.output_path, config.encryption_key,
        report_path=config.report_path, encrypted_path=config.encrypted_path,
    )
    print(f"Reference region: r={report.ref_rows} c={report.ref_cols}")
    print(f"Net payload: {report.net_payload_bits} bits, ER = {report.embedding_rate:.{settings.report_decimals}f} bpp")
    return 0
