"""Pydantic request/response models for the session service."""

from typing import Any

from pydantic import BaseModel, ConfigDict


class CommandRequest(BaseModel):
    model_config = ConfigDict(extra="allow")
    command: str


class ErrorInfo(BaseModel):
    type: str
    message: str


class CommandAck(BaseModel):
    ok: bool
    seq: int
    mode: str
    error: ErrorInfo | None = None


class SnapshotModel(BaseModel):
    seq: int
    mode: str
    completed: bool
    closed: bool
    current_row: int
    current_step: int | None
    carousel: dict[str, Any]
    page: dict[str, Any] | None
    highlight: dict[str, Any] | None
    prediction: str | None
    paused_diagnostic: str | None
    catalog_size: int
    tick_rate: float
    table: dict[str, Any] | None


class PageModel(BaseModel):
    id: str
    revision: int
    tree: dict[str, Any]
