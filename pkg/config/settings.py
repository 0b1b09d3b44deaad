from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    app_name: str = "HVLCL-RDHEI codec"
    log_level: str = "INFO"

    # Reference region search
    initial_ref_rows: int = 1
    initial_ref_cols: int = 1
    max_reference_lines: int = 255  # r and c are stored in 8-bit header fields

    # Reporting
    report_decimals: int = 3

    # Corpus analysis
    analyze_workers: int = 4
    verify_payload_fill: float = 1.0

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"  # Ignore unrelated keys in .env

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings,
                                   dotenv_settings, file_secret_settings):
        # The CLI takes no configuration from the process environment
        return init_settings, dotenv_settings


settings = Settings()
