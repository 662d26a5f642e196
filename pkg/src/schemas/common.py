"""
Common Pydantic schemas shared by every artifact.
"""

from pydantic import BaseModel


class ArtifactMeta(BaseModel):
    """Provenance block embedded in every CSV header and JSON artifact."""

    tool: str
    version: str
    config_sha256: str


class MessageResponse(BaseModel):
    """Short status message printed by a command."""

    command: str
    exit_code: int
    message: str
