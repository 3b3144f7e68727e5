"""Movement profiles of soccer players from event-based match logs."""

from .chances import PreShotSet, preshot_player, preshot_team
from .cluster import ClusterModel, assign, inertia, init_centroids, minibatch_kmeans
from .extract import (
    MovementVector,
    extract_all,
    extract_movements,
    filter_speed,
    impute_reception_timestamps,
    possession_flag,
    to_standard_frame,
)
from .ingest import Event, Match, Venue, load_venues, lookup_venue, parse_event_log
from .metrics import (
    ConsistencySeries,
    SimilarityList,
    UniquenessScore,
    consistency,
    consistency_series,
    cosine_distance,
    most_similar,
    uniqueness,
    uniqueness_table,
)
from .profile import CharacteristicVector, MovementFilter, build_characteristic, build_profiles, top_features
from .synthgen import SeasonSpec, generate_season, scale_preset

__version__ = "0.1.0"
