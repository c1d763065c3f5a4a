import os
from dotenv import load_dotenv

load_dotenv()


class BaseConfig:
    """Base configuration"""
    SECRET_KEY = os.getenv('SECRET_KEY', 'default_secret_key')
    # Logging
    LOG_DIR = os.getenv('LOG_DIR', 'logs')
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_TO_FILE = os.getenv('LOG_TO_FILE', 'true').lower() == 'true'
    LOG_MAX_BYTES = 10485760  # 10MB
    LOG_BACKUP_COUNT = 5
    # Integration defaults
    DEFAULT_OUTPUT_IRI = 'http://example.org/integrated'
    DEFAULT_THRESHOLD = 0.0
    PARSE_WORKERS = int(os.getenv('PARSE_WORKERS', 4))
    JUSTIFICATION_SAMPLE = int(os.getenv('JUSTIFICATION_SAMPLE', 10))
    # HTTP service
    MAX_CONTENT_LENGTH = 64 * 1024 * 1024
    RATELIMIT_STORAGE_URI = "memory://"
    RATELIMIT_DEFAULT = "200 per day"
    SWAGGER_UI_DOC_EXPANSION = 'list'
    RESTX_MASK_SWAGGER = False
    CACHE_TYPE = os.getenv('CACHE_TYPE', 'SimpleCache')
    CACHE_DEFAULT_TIMEOUT = 300  # 5 minutes
    CACHE_KEY_PREFIX = 'ontology_integrator_'


class DevelopmentConfig(BaseConfig):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG')


class TestingConfig(BaseConfig):
    """Testing configuration"""
    TESTING = True
    LOG_TO_FILE = False
    RATELIMIT_ENABLED = False
    # Disable caching in testing
    CACHE_TYPE = 'NullCache'


class ProductionConfig(BaseConfig):
    """Production configuration"""
    DEBUG = False
    CORS_ORIGINS = os.getenv('ALLOWED_ORIGINS', '').split(',')
    RATELIMIT_STORAGE_URI = os.getenv('RATELIMIT_STORAGE_URI', 'memory://')
    CACHE_TYPE = os.getenv('CACHE_TYPE', 'SimpleCache')


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}

# Set the active configuration
Config = config[os.getenv('ONTOLOGY_ENV', 'default')]
