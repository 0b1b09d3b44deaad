from pydantic import BaseModel, Field
from typing import Optional, List
import math


class TagRow(BaseModel):
    """Per-label line of a capacity report"""
    tag: int
    count: int
    codeword: str
    capacity_per_pixel: int
    code_length: int
    payload_per_pixel: int
    capacity_bits: int
    code_bits: int


class CapacityReport(BaseModel):
    """Capacity accounting for one labeled image"""
    rows: int
    cols: int
    ref_rows: int
    ref_cols: int
    reference_count: int
    tags: List[TagRow] = Field(default_factory=list)
    total_capacity_bits: int
    code_bits: int
    reference_bits: int
    header_bits: int
    legacy_header_bits: int
    net_payload_bits: int
    embedding_rate: float

    @property
    def legacy_payload_bits(self) -> int:
        """Payload under the original 52-bit header accounting"""
        return self.total_capacity_bits - self.code_bits - self.legacy_header_bits

    def to_table(self, decimals: int = 3) -> str:
        """Render the per-label breakdown with totals"""
        lines = [
            f"Image {self.rows}x{self.cols}, reference region r={self.ref_rows} c={self.ref_cols}",
            f"{'Label':>5}  {'Distribution':>12}  {'Code':>6}  {'Capacity (bits)':>15}  "
            f"{'Code length (bits)':>18}  {'Payload (bits)':>14}",
            f"{-1:>5}  {self.reference_count:>12}  {'-':>6}  {'-':>15}  {'-':>18}  {'-':>14}",
        ]
        for row in self.tags:
            lines.append(
                f"{row.tag:>5}  {row.count:>12}  {row.codeword:>6}  {row.capacity_per_pixel:>15}  "
                f"{row.code_length:>18}  {row.payload_per_pixel:>14}"
            )
        lines.append(
            f"{'Total':>5}  {'-':>12}  {'-':>6}  {self.total_capacity_bits:>15}  "
            f"{self.code_bits:>18}  {self.total_capacity_bits - self.code_bits:>14}"
        )
        lines.append(f"Header bits: {self.header_bits} (original accounting: {self.legacy_header_bits})")
        lines.append(f"Net payload: {self.net_payload_bits} bits "
                     f"(original accounting: {self.legacy_payload_bits} bits)")
        lines.append(f"ER = {self.embedding_rate:.{decimals}f} bpp")
        return "\n".join(lines)


class EmbedReport(BaseModel):
    """What the data hider managed to embed"""
    payload_bits: int
    capacity_bits: int
    pixels: int
    embedding_rate: float


class QualityReport(BaseModel):
    """Reconstruction quality of a recovered image"""
    psnr: float
    ssim: Optional[float] = None  # undefined below the SSIM window size
    er: Optional[float] = None

    @property
    def psnr_text(self) -> str:
        return "+inf" if math.isinf(self.psnr) else f"{self.psnr:.2f}"

    def to_line(self, decimals: int = 3) -> str:
        if self.ssim is None:
            return f"PSNR = {self.psnr_text} dB"
        return f"PSNR / SSIM: {self.psnr_text} / {self.ssim:.{decimals}f}"


class AnalysisRow(BaseModel):
    """One corpus image in the analyzer CSV"""
    filename: str
    rows: int
    cols: int
    status: str = "ok"
    ref_rows: Optional[int] = None
    ref_cols: Optional[int] = None
    reference_count: Optional[int] = None
    counts: List[int] = Field(default_factory=list)
    total_capacity_bits: Optional[int] = None
    code_bits: Optional[int] = None
    net_payload_bits: Optional[int] = None
    embedding_rate: float = 0.0
    psnr: Optional[float] = None
    ssim: Optional[float] = None
    payload_match: Optional[bool] = None


class AnalysisSummary(BaseModel):
    """Best / worst / average ER over a corpus"""
    images: int
    failures: int
    best_er: float
    worst_er: float
    average_er: float
    best_file: Optional[str] = None
    worst_file: Optional[str] = None
