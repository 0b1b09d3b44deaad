from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from domain.models import KeySpec


class CommandConfig(BaseModel):
    """Validated arguments of one CLI invocation"""
    command: str
    input_path: Path
    output_path: Optional[Path] = None
    key_e: Optional[str] = Field(None, description="Encryption key as hex")
    key_w: Optional[str] = Field(None, description="Data hiding key as hex")
    payload_path: Optional[Path] = None
    report_path: Optional[Path] = None
    original_path: Optional[Path] = None
    encrypted_path: Optional[Path] = None
    verify: bool = False

    @field_validator("key_e", "key_w")
    @classmethod
    def validate_hex(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        KeySpec.from_hex(value)
        return value

    @property
    def encryption_key(self) -> KeySpec:
        return KeySpec.from_hex(self.key_e or "")

    @property
    def hiding_key(self) -> KeySpec:
        return KeySpec.from_hex(self.key_w or "")
