from app.routes.orbits import orbits_command
from app.routes.resonance import resonance_command
from app.routes.verify import verify_command


commands = [orbits_command, resonance_command, verify_command]
