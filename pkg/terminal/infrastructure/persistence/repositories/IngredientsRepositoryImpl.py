import json
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError
from terminal.domain.model.aggregates.TerminalIngredients import (
    SubsystemCertificate,
    SubsystemIngredients,
    SynthesisCertificate,
    TerminalIngredients,
)
from terminal.infrastructure.persistence.resources.IngredientsFileResource import (
    CertificateResource,
    IngredientsFileResource,
    SubsystemCertificateResource,
    SubsystemIngredientsResource,
)

logger = logging.getLogger(__name__)


class IngredientsRepositoryImpl:
    """JSON file implementation of IngredientsRepository"""

    def load(self, path: Path) -> TerminalIngredients:
        path = Path(path)
        try:
            resource = IngredientsFileResource.model_validate_json(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise SchemaError(f"Ingredients file not found: {path}")
        except ValidationError as e:
            raise SchemaError(f"Malformed ingredients file {path}: {e}")
        ingredients = self.to_aggregate(resource)
        logger.info(f"Terminal ingredients loaded from {path}")
        return ingredients

    def save(self, ingredients: TerminalIngredients, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = self.to_resource(ingredients).model_dump(mode="json")
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        logger.info(f"✓ Terminal ingredients written to {path}")
        return path

    # =========================================================================
    # Resource ↔ Aggregate
    # =========================================================================

    @staticmethod
    def to_aggregate(resource: IngredientsFileResource) -> TerminalIngredients:
        certificate = None
        if resource.certificate is not None:
            certificate = SynthesisCertificate(
                lifting=resource.certificate.lifting,
                objective=resource.certificate.objective,
                solver=resource.certificate.solver,
                subsystems=tuple(
                    SubsystemCertificate(
                        id=c.id,
                        E=np.array(c.E),
                        Y=np.array(c.Y),
                        Gamma=np.array(c.Gamma),
                        Theta={int(j): np.array(block) for j, block in c.Theta.items()},
                        lmi_min_eigenvalue=c.lmi_min_eigenvalue,
                        relaxation_min_eigenvalue=c.relaxation_min_eigenvalue,
                        coupling_max_eigenvalue=c.coupling_max_eigenvalue,
                    )
                    for c in resource.certificate.subsystems
                ),
            )
        ids = [s.id for s in resource.subsystems]
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise SchemaError(f"Ingredient ids must be 1..M, got {ids}")
        return TerminalIngredients(
            subsystems=tuple(
                SubsystemIngredients(id=s.id, P=np.array(s.P), K=np.array(s.K), epsilon=s.epsilon)
                for s in resource.subsystems
            ),
            certificate=certificate,
        )

    @staticmethod
    def to_resource(ingredients: TerminalIngredients) -> IngredientsFileResource:
        certificate = None
        if ingredients.certificate is not None:
            c = ingredients.certificate
            certificate = CertificateResource(
                lifting=c.lifting,
                objective=c.objective,
                solver=c.solver,
                subsystems=[
                    SubsystemCertificateResource(
                        id=s.id,
                        E=s.E.tolist(),
                        Y=s.Y.tolist(),
                        Gamma=s.Gamma.tolist(),
                        Theta={str(j): block.tolist() for j, block in s.Theta.items()},
                        lmi_min_eigenvalue=s.lmi_min_eigenvalue,
                        relaxation_min_eigenvalue=s.relaxation_min_eigenvalue,
                        coupling_max_eigenvalue=s.coupling_max_eigenvalue,
                    )
                    for s in c.subsystems
                ],
            )
        return IngredientsFileResource(
            subsystems=[
                SubsystemIngredientsResource(id=s.id, P=s.P.tolist(), K=s.K.tolist(), epsilon=s.epsilon)
                for s in ingredients.subsystems
            ],
            certificate=certificate,
        )
