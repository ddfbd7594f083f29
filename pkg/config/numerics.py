from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class QuadratureSettings(BaseSettings):
    """
    Default quadrature orders and tolerances
    """

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    radial_order: int = Field(default=12, ge=2, validation_alias="YM_QUAD_RADIAL")
    sphere_order: int = Field(default=12, ge=2, validation_alias="YM_QUAD_SPHERE")
    theta_order: int = Field(default=10, ge=2, validation_alias="YM_QUAD_THETA")
    phi_points: int = Field(default=16, ge=4, validation_alias="YM_QUAD_PHI")
    target_rel_tol: float = Field(
        default=1e-6, gt=0.0, lt=1.0, validation_alias="YM_QUAD_TOL"
    )
    max_refinements: int = Field(default=2, ge=0, validation_alias="YM_QUAD_MAX_REFINE")
    mc_samples: int = Field(default=0, ge=0, validation_alias="YM_MC_SAMPLES")
    seed: int = Field(default=20240601, validation_alias="YM_SEED")

    def to_spec(self):
        """
        Returns the QuadratureSpec described by these settings
        """
        from app.quadrature.models.quadrature_spec import QuadratureSpec

        return QuadratureSpec(
            radial_order=self.radial_order,
            psi_order=self.sphere_order,
            theta_order=self.theta_order,
            phi_points=self.phi_points,
            mc_samples=self.mc_samples,
            seed=self.seed,
            target_rel_tol=self.target_rel_tol,
            max_refinements=self.max_refinements,
        )


class SearchSettings(BaseSettings):
    """
    Multistart, grid and window defaults for the reduced model
    """

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    seed: int = Field(default=20240601, validation_alias="YM_SEED")
    n_starts: int = Field(default=32, ge=1, validation_alias="YM_N_STARTS")
    grid_points: int = Field(default=5, ge=2, le=9, validation_alias="YM_GRID_POINTS")
    window_d0: float = Field(default=0.5, gt=0.0, lt=1.0, validation_alias="YM_WINDOW_D0")
    window_c0: float = Field(default=1.0, gt=0.0, validation_alias="YM_WINDOW_C0")
    tol_mu_rel: float = Field(default=1e-9, gt=0.0, validation_alias="YM_TOL_MU_REL")


class NumericsSettings(BaseSettings):
    """
    Main numerics settings container
    """

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)

