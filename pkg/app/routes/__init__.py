from app.routes import api  # noqa: F401

__all__ = ["api"]
