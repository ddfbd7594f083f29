from .app import AppSettings
from .numerics import NumericsSettings


class Settings:
    app = AppSettings()
    numerics = NumericsSettings()


settings = Settings()
