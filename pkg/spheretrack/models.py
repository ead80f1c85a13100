import json
from datetime import datetime

from sqlalchemy import DateTime, Integer, String, Text, UniqueConstraint
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    pass


class DiagramPreset(Base):
    """A verified Heegaard diagram for one lens space, stored as its JSON export."""
    __tablename__ = "diagram_preset"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    p: Mapped[int] = mapped_column(Integer, nullable=False)
    q: Mapped[int] = mapped_column(Integer, nullable=False)
    model_version: Mapped[str] = mapped_column(String(50), nullable=False)
    payload_json: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    # One preset per lens space and triangulation model.
    __table_args__ = (UniqueConstraint("p", "q", "model_version", name="_preset_uc"),)

    def to_dict(self):
        """Serializes the preset, decoding the stored diagram."""
        return {
            "id": self.id,
            "p": self.p,
            "q": self.q,
            "model_version": self.model_version,
            "diagram": json.loads(self.payload_json),
        }

    def __repr__(self):
        return f"<DiagramPreset L({self.p},{self.q}) {self.model_version}>"


class DiskSetCache(Base):
    """
    The disk classes enumerated on one side at one budget.

    The payload is the sorted list of boundary weight vectors; content_hash
    is the sha256 of that payload and is checked on every read.
    """
    __tablename__ = "disk_set_cache"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    p: Mapped[int] = mapped_column(Integer, nullable=False)
    q: Mapped[int] = mapped_column(Integer, nullable=False)
    side: Mapped[str] = mapped_column(String(1), nullable=False)
    max_weight: Mapped[int] = mapped_column(Integer, nullable=False)
    model_version: Mapped[str] = mapped_column(String(50), nullable=False)
    content_hash: Mapped[str] = mapped_column(String(64), nullable=False)
    payload_json: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    __table_args__ = (
        UniqueConstraint("p", "q", "side", "max_weight", "model_version", name="_disk_set_uc"),
    )

    @property
    def weights(self):
        return [tuple(row) for row in json.loads(self.payload_json)]

    def to_dict(self):
        return {
            "id": self.id,
            "p": self.p,
            "q": self.q,
            "side": self.side,
            "max_weight": self.max_weight,
            "model_version": self.model_version,
            "content_hash": self.content_hash,
            "disk_count": len(json.loads(self.payload_json)),
        }

    def __repr__(self):
        return f"<DiskSetCache L({self.p},{self.q}) {self.side} N={self.max_weight}>"
