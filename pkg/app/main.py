from __future__ import annotations

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.core.config import settings
from app.core.logging import configure_logging
from app.routes import api

configure_logging(settings.log_level)


def create_app() -> FastAPI:
    application = FastAPI(title=settings.app_name)
    application.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    application.include_router(api.router)

    @application.get("/healthz")
    async def healthcheck() -> dict[str, str]:
        return {"status": "ok"}

    return application


app = create_app()
