from dotenv import load_dotenv
import logging
import os
import sys

# Load environment variables
load_dotenv()

# Add project root to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

# Local imports
from cli.commands import cli

# ---------- LOGGING ----------

logging.basicConfig(
    level=os.getenv('STEINBERG_LOG_LEVEL', 'INFO').upper(),
    format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    stream=sys.stderr,
)

# ---------- ENTRY POINT ----------

if __name__ == '__main__':
    cli(prog_name='app.py')
