from .latent_x import LatentState, log_full_conditional_x, update_latent_x
