import { TriageApi } from './api';
import { App } from './app';

// Reviewer identity is entered once per session and sent as the actor
// header with every decision; there is no further auth layer.
function reviewerName(): string {
  let name = sessionStorage.getItem('reviewtriage-actor') ?? '';
  while (!name) {
    name = (window.prompt('Reviewer name for the audit trail:') ?? '').trim();
  }
  sessionStorage.setItem('reviewtriage-actor', name);
  return name;
}

function bootstrap(): void {
  const root = document.getElementById('root');
  if (!root) throw new Error('missing #root element');
  const actor = reviewerName();
  const actorLabel = document.getElementById('actor-label');
  if (actorLabel) actorLabel.textContent = actor;
  const app = new App(root, new TriageApi(actor));
  document.getElementById('nav-queue')?.addEventListener('click', () => void app.showQueue());
  document
    .getElementById('nav-dashboard')
    ?.addEventListener('click', () => void app.showDashboard());
  void app.start();
}

bootstrap();
