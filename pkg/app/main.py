from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.routes import analysis_routes, estimation_routes, network_routes, simulation_routes
from app.core.config import settings
import uvicorn
import logging

# Config logging
logging.basicConfig(level=settings.log_level)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="🕸️ BAR Network API",
    description="API para simular, estimar e avaliar redes Bernoulli autorregressivas",
    version="1.0.0"
)

# CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.allowed_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Rotas
app.include_router(network_routes.router, prefix="/api")
app.include_router(simulation_routes.router, prefix="/api")
app.include_router(estimation_routes.router, prefix="/api")
app.include_router(analysis_routes.router, prefix="/api")


@app.get("/")
def root():
    return {"message": "BAR Network API 🕸️"}


if __name__ == "__main__":
    uvicorn.run(
        "app.main:app",
        host="0.0.0.0",
        port=8000,
        reload=True,
        log_level="info"
    )
