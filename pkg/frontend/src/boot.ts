import { bootstrap } from "./main";
import "./styles.css";

const root = document.getElementById("app");
if (root !== null) {
  void bootstrap(root);
}
